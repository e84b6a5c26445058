#include "qpwalk/format.hpp"

#include <charconv>

namespace qpwalk {

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace qpwalk
