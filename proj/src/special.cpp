#include "orderk/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

namespace orderk {

double gamma_p_reg(double a, double x) { return boost::math::gamma_p(a, x); }

double gamma_q_reg(double a, double x) { return boost::math::gamma_q(a, x); }

}  // namespace orderk
