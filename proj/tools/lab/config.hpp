#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subcycle/errors.hpp"
#include "subcycle/reaction_diffusion.hpp"
#include "subcycle/splitting.hpp"

namespace lab {

inline const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"linear-taylor",   "linear-aorder-map",       "nonlinear-aorder",
                                            "pde-decay",       "pde-inhomogeneous-order", "appendix-b-bounds"};
  return ids;
}

/// A theta value that may depend on N: either a number or the token "(N+1)/(2N)".
struct ThetaValue {
  double value = 0.0;
  bool n_dependent = false;

  double resolve(int n) const { return n_dependent ? (n + 1.0) / (2.0 * n) : value; }
};

struct ThetaEntry {
  ThetaValue fast, slow;

  subcycle::ThetaPair resolve(int n) const { return {fast.resolve(n), slow.resolve(n)}; }
};

struct Range {
  double start = 0.0, stop = 1.0;
  int count = 2;

  std::vector<double> values() const;
};

struct PdeCase {
  std::string label;
  int scheme = 1;
  subcycle::ThetaPair thetas{0.5, 0.5};
  subcycle::DtRule dt_rule;
  subcycle::DirichletData bc;
};

struct ExperimentConfig {
  std::string experiment;
  std::string output;  ///< base file name, defaults to the experiment id
  int jobs = 1;
  std::uint64_t seed = 1;

  // model
  double c = 1.0;
  double kappa = 1.0;
  double nu = 1.0;
  double length = 6.283185307179586;
  std::vector<int> n_ratios{10};

  std::vector<int> schemes{1, 2, 3, 4, 5, 6};
  std::vector<subcycle::StrangOrder> strang_orders{subcycle::StrangOrder::SFS};
  std::vector<ThetaEntry> thetas;
  Range theta_fast, theta_slow;  ///< linear-aorder-map grid

  std::vector<double> dt_grid;
  double u0 = 5.0, v0 = 1.0;
  double t_final = 5.0;

  std::vector<int> j_list;
  std::vector<double> dt_cfl_fractions;
  long stride = 100;
  double transient_fraction = 0.2;
  std::vector<PdeCase> cases;
};

/// Parses and validates a YAML config. Throws subcycle::ConfigError.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& yaml_text, const std::string& origin = "<string>");

}  // namespace lab
