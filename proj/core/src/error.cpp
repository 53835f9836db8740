#include "zetamoments/error.hpp"

namespace zm {

void throw_domain(const std::string& what) { throw DomainError(what); }

}  // namespace zm
