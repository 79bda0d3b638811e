#include "walshprep/error.hpp"

#include <fmt/format.h>

namespace walshprep {

DivergenceError::DivergenceError(int epoch, double last_finite_loss)
    : Error(fmt::format("training diverged at epoch {} (last finite loss {:.6g})",
                        epoch, last_finite_loss)),
      epoch_(epoch), last_finite_loss_(last_finite_loss) {}

} // namespace walshprep
