#ifndef MSVEC_VERSION_HPP
#define MSVEC_VERSION_HPP

#define MSVEC_VERSION_STRING "0.1.0"

namespace msvec {
inline const char* version() { return MSVEC_VERSION_STRING; }
}  // namespace msvec

#endif
