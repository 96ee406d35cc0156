#pragma once

#include <stdexcept>
#include <string>

namespace latmds {

enum class errc {
  invalid_input,
  degenerate_landmarks,
  not_laterable,
  degenerate_step,
  numerical_failure,
  scenario_infeasible,
  io_failure,
};

/// Library-wide exception. `detail()` carries context-specific data
/// (e.g. the walk step index for errc::degenerate_step).
class error : public std::runtime_error {
public:
  error(errc code, const std::string& what, long detail = -1)
      : std::runtime_error(what), code_(code), detail_(detail) {}

  errc code() const noexcept { return code_; }
  long detail() const noexcept { return detail_; }

private:
  errc code_;
  long detail_;
};

namespace detail {
inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) throw error(code, what);
}
}  // namespace detail

}  // namespace latmds
