#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ifusion {

enum class ErrorKind {
  kParse,
  kSemantic,
  kResourceLimit,
  kSymbolNotInSignature,
  kArityMismatch,
  kArityConflict,
  kNoMediator,
  kInvalidDiagram,
};

struct SourceSpan {
  std::string file;
  int line = 0;
  int column_begin = 0;
  int column_end = 0;

  std::string str() const {
    std::ostringstream os;
    os << file << ':' << line << ':' << column_begin;
    return os.str();
  }
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<SourceSpan> span = std::nullopt)
      : std::runtime_error(format(message, span)),
        kind_(kind),
        span_(std::move(span)) {}

  ErrorKind kind() const { return kind_; }
  const std::optional<SourceSpan>& span() const { return span_; }

  // 2 parse, 3 semantic, 4 resource limit.
  int exit_code() const {
    switch (kind_) {
      case ErrorKind::kParse:
        return 2;
      case ErrorKind::kResourceLimit:
        return 4;
      default:
        return 3;
    }
  }

 private:
  static std::string format(const std::string& message,
                            const std::optional<SourceSpan>& span) {
    if (!span) return message;
    return span->str() + ": " + message;
  }

  ErrorKind kind_;
  std::optional<SourceSpan> span_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message,
                              std::optional<SourceSpan> span = std::nullopt) {
  throw Error(kind, message, std::move(span));
}

}  // namespace ifusion
