#include "subcycle/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace subcycle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ThetaPair::ThetaPair(double theta_f, double theta_s) : fast_(theta_f), slow_(theta_s) {
  if (!(theta_f >= 0.0 && theta_f <= 1.0) || !(theta_s >= 0.0 && theta_s <= 1.0)) {
    std::ostringstream os;
    os << "theta pair (" << theta_f << ", " << theta_s << ") outside [0,1]^2";
    throw InvalidArgument(os.str());
  }
}

const char* composition_name(Composition kind) {
  switch (kind) {
    case Composition::LieSF: return "LieSF";
    case Composition::LieFS: return "LieFS";
    case Composition::StrangSFS: return "StrangSFS";
    case Composition::StrangFSF: return "StrangFSF";
    case Composition::Weighted: return "Weighted";
  }
  return "?";
}

void SchemeSpec::validate() const {
  if (n_ratio < 1) throw InvalidArgument("n_ratio must be >= 1");
}

SchemeSpec numbered_scheme(int number, int n_ratio, ThetaPair thetas, StrangOrder strang) {
  SchemeSpec s;
  s.n_ratio = n_ratio;
  s.thetas = thetas;
  s.subcycled = (number % 2) == 1;
  switch (number) {
    case 1:
    case 2: s.kind = Composition::LieSF; break;
    case 3:
    case 4:
      s.kind = strang == StrangOrder::SFS ? Composition::StrangSFS : Composition::StrangFSF;
      break;
    case 5:
    case 6: s.kind = Composition::Weighted; break;
    default: throw InvalidArgument("scheme number must be in 1..6");
  }
  s.validate();
  return s;
}

int scheme_number(const SchemeSpec& spec) {
  const int odd = spec.subcycled ? 0 : 1;
  switch (spec.kind) {
    case Composition::LieSF: return 1 + odd;
    case Composition::StrangSFS:
    case Composition::StrangFSF: return 3 + odd;
    case Composition::Weighted: return 5 + odd;
    case Composition::LieFS: return 0;
  }
  return 0;
}

std::string scheme_label(const SchemeSpec& spec) {
  const int n = scheme_number(spec);
  if (n == 0) return std::string(composition_name(spec.kind)) + (spec.subcycled ? "" : "-nosub");
  std::string label = std::to_string(n);
  if (spec.kind == Composition::StrangFSF) label += "~";
  return label;
}

double theta_step_bound(double theta, double rate) {
  if (rate <= 0.0 || theta >= 0.5) return kInf;
  return 2.0 / ((1.0 - 2.0 * theta) * rate);
}

double positivity_step_bound(double theta, double rate) {
  if (rate <= 0.0 || theta >= 1.0) return kInf;
  return 1.0 / ((1.0 - theta) * rate);
}

double ode_stability_interval(const SchemeSpec& spec, double c) {
  spec.validate();
  if (!(c > 0.0)) throw InvalidArgument("c must be positive");
  // Fraction of dt covered by each fast (at rate N c) and slow (at rate c) substep.
  const double n = spec.n_ratio;
  double fast_frac = 1.0 / n;
  double slow_frac = 1.0;
  const bool strang_sfs = spec.kind == Composition::StrangSFS;
  const bool strang_fsf = spec.kind == Composition::StrangFSF;
  if (strang_sfs) slow_frac = 0.5;
  if (strang_fsf) fast_frac = 0.5 / n;
  if (!spec.subcycled) slow_frac /= n;
  const double fast_rate = n * c * fast_frac;
  const double slow_rate = c * slow_frac;
  return std::min(theta_step_bound(spec.thetas.fast(), fast_rate),
                  theta_step_bound(spec.thetas.slow(), slow_rate));
}

double pde_stability_interval(double c, double extra_stiffness) {
  if (!(c > 0.0) || extra_stiffness < 0.0) throw InvalidArgument("pde_stability_interval: bad rates");
  return 1.0 / (c + extra_stiffness);
}

double stability_interval(const SchemeSpec& spec, double c, double extra_stiffness) {
  if (extra_stiffness < 0.0) throw InvalidArgument("extra_stiffness must be >= 0");
  if (extra_stiffness > 0.0) {
    spec.validate();
    return pde_stability_interval(c, extra_stiffness);
  }
  return ode_stability_interval(spec, c);
}

}  // namespace subcycle
