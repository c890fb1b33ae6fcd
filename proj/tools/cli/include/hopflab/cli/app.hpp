#pragma once

#include <iosfwd>

namespace hopflab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitFailed = 2;

// Entry point of the hopflab executable. Reports go to out, diagnostics to
// err. Returns 0 on success, 1 for validation or parse errors and 2 when a
// certification or verification check fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hopflab::cli
