#ifndef AGREEMENT_CLI_H_
#define AGREEMENT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace agreement {

// Exit codes: 0 success, 1 partial failure (some features failed),
// 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitError = 2;

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agreement

#endif  // AGREEMENT_CLI_H_
