#include "fadm/error.hpp"

namespace fadm {

void throw_input(const std::string& what) { throw InputError(what); }

}  // namespace fadm
