#include "ptgne/errors.hpp"

#include <sstream>

namespace ptgne {

namespace {
std::string describe(const std::string& quantity, double value, double threshold) {
  std::ostringstream os;
  os.precision(6);
  os << "convergence failure: " << quantity << " = " << value << " exceeds " << threshold;
  return os.str();
}
}  // namespace

ConvergenceFailure::ConvergenceFailure(const std::string& quantity, double value,
                                       double threshold)
    : Error(describe(quantity, value, threshold)),
      quantity_(quantity),
      value_(value),
      threshold_(threshold) {}

}  // namespace ptgne
