#ifndef PROPGRAPH_ERROR_HPP
#define PROPGRAPH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace propgraph {

// Error categories mirror the CLI exit codes and the C API status codes.
enum class ErrorCode {
  InvalidInput = 3,  // bad arguments, malformed files, contract violations
  Refused = 4,       // analysis refused (disconnected, directed, too large)
  Overflow = 5,      // integer walk-count overflow
  Internal = 6,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

}  // namespace propgraph

#endif
