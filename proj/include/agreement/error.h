#ifndef AGREEMENT_ERROR_H_
#define AGREEMENT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace agreement {

enum class ErrorKind {
  kMalformedLine,
  kInvalidHead,
  kInvalidId,
  kEncodingError,
  kMalformedFeats,
  kEmptyMarginals,
  kEmptyDataset,
  kVerdictMismatch,
  kNoMatchingRule,
  kNoEvaluableTriples,
  kFeatureMismatch,
  kEmptyAnnotations,
  kLengthMismatch,
  kZeroVariance,
  kEmptyCounts,
  kInvalidGrammar,
  kInvalidArgument,
  kMalformedDocument,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and tests)
// can branch on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace agreement

#endif  // AGREEMENT_ERROR_H_
