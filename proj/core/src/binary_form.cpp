// Compilation unit anchoring the header-only binary-form templates.
#include "sscope/binary_form.hpp"
#include "sscope/subresultants.hpp"

namespace sscope {

template struct BinaryForm<Rat>;
template struct BinaryForm<CD>;
template std::vector<Rat> principal_subresultants(const BinaryForm<Rat>&,
                                                  const BinaryForm<Rat>&);
template std::vector<CD> principal_subresultants(const BinaryForm<CD>&,
                                                 const BinaryForm<CD>&);

}  // namespace sscope
