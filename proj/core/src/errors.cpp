#include "rdo/errors.hpp"

namespace rdo {

void throw_contract(const std::string& what) { throw ContractViolation(what); }

} // namespace rdo
