#include "agreement/error.h"

namespace agreement {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedLine: return "MalformedLine";
    case ErrorKind::kInvalidHead: return "InvalidHead";
    case ErrorKind::kInvalidId: return "InvalidId";
    case ErrorKind::kEncodingError: return "EncodingError";
    case ErrorKind::kMalformedFeats: return "MalformedFeats";
    case ErrorKind::kEmptyMarginals: return "EmptyMarginals";
    case ErrorKind::kEmptyDataset: return "EmptyDataset";
    case ErrorKind::kVerdictMismatch: return "VerdictMismatch";
    case ErrorKind::kNoMatchingRule: return "NoMatchingRule";
    case ErrorKind::kNoEvaluableTriples: return "NoEvaluableTriples";
    case ErrorKind::kFeatureMismatch: return "FeatureMismatch";
    case ErrorKind::kEmptyAnnotations: return "EmptyAnnotations";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kZeroVariance: return "ZeroVariance";
    case ErrorKind::kEmptyCounts: return "EmptyCounts";
    case ErrorKind::kInvalidGrammar: return "InvalidGrammar";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kMalformedDocument: return "MalformedDocument";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace agreement
