#pragma once

#include <compare>
#include <functional>
#include <string>
#include <utility>

#include "subcycle/errors.hpp"
#include "subcycle/mat2.hpp"

namespace subcycle {

/// Implicitness weights of the fast and slow theta-schemes, each in [0, 1].
class ThetaPair {
 public:
  ThetaPair(double theta_f, double theta_s);

  double fast() const { return fast_; }
  double slow() const { return slow_; }

  auto operator<=>(const ThetaPair&) const = default;

 private:
  double fast_;
  double slow_;
};

enum class Composition { LieSF, LieFS, StrangSFS, StrangFSF, Weighted };

enum class StrangOrder { SFS, FSF };

const char* composition_name(Composition kind);

struct SchemeSpec {
  Composition kind = Composition::LieSF;
  bool subcycled = true;
  int n_ratio = 1;
  ThetaPair thetas{0.5, 0.5};

  void validate() const;
};

/// Schemes #1..#6: odd numbers are subcycled, 1/2 Lie SF, 3/4 Strang, 5/6 weighted.
SchemeSpec numbered_scheme(int number, int n_ratio, ThetaPair thetas,
                           StrangOrder strang = StrangOrder::SFS);

/// Inverse of numbered_scheme; 0 for the Lie FS kinds which carry no number.
int scheme_number(const SchemeSpec& spec);

/// "1".."6", "3~"/"4~" for the FSF Strang variants, kind name otherwise.
std::string scheme_label(const SchemeSpec& spec);

// ---------------------------------------------------------------------------
// Flow algebra. A specialization provides compose(later, earlier),
// average(a, b) and power(f, n).

template <class Flow>
struct FlowAlgebra;

template <class T>
struct FlowAlgebra<BasicMat2<T>> {
  using F = BasicMat2<T>;
  static F compose(const F& later, const F& earlier) { return later * earlier; }
  static F average(const F& a, const F& b) { return T(0.5) * (a + b); }
  static F power(const F& f, int n) {
    F r = F::identity();
    for (int i = 0; i < n; ++i) r = f * r;
    return r;
  }
};

/// Opaque state-to-state map. State needs operator+ and scalar operator*.
template <class State>
class StateMap {
 public:
  using Fn = std::function<State(const State&)>;

  StateMap() : fn_([](const State& s) { return s; }) {}
  explicit StateMap(Fn fn) : fn_(std::move(fn)) {}

  State operator()(const State& s) const { return fn_(s); }

 private:
  Fn fn_;
};

template <class State>
struct FlowAlgebra<StateMap<State>> {
  using F = StateMap<State>;
  static F compose(const F& later, const F& earlier) {
    return F([later, earlier](const State& s) { return later(earlier(s)); });
  }
  static F average(const F& a, const F& b) {
    return F([a, b](const State& s) { return 0.5 * (a(s) + b(s)); });
  }
  static F power(const F& f, int n) {
    return F([f, n](const State& s) {
      State r = s;
      for (int i = 0; i < n; ++i) r = f(r);
      return r;
    });
  }
};

/// One application of the composition pattern. For subcycled kinds this covers dt;
/// for the others it is the single substep covering dt / N.
/// fast(h) and slow(h) must return the flow over a duration h.
template <class Flow, class Time, class FastFactory, class SlowFactory>
Flow compose_substep(const SchemeSpec& spec, const FastFactory& fast, const SlowFactory& slow,
                     const Time& dt) {
  using A = FlowAlgebra<Flow>;
  spec.validate();
  const int n = spec.n_ratio;
  const Time h_sub = dt / Time(n);
  auto lie_sf = [&](const Flow& f, const Flow& s) { return A::compose(s, f); };
  auto lie_fs = [&](const Flow& f, const Flow& s) { return A::compose(f, s); };

  if (spec.subcycled) {
    switch (spec.kind) {
      case Composition::LieSF:
        return lie_sf(A::power(fast(h_sub), n), slow(dt));
      case Composition::LieFS:
        return lie_fs(A::power(fast(h_sub), n), slow(dt));
      case Composition::StrangSFS: {
        const Flow s_half = slow(dt / Time(2));
        return A::compose(s_half, A::compose(A::power(fast(h_sub), n), s_half));
      }
      case Composition::StrangFSF: {
        const Flow f_half = A::power(fast(h_sub / Time(2)), n);
        return A::compose(f_half, A::compose(slow(dt), f_half));
      }
      case Composition::Weighted: {
        const Flow f = A::power(fast(h_sub), n);
        const Flow s = slow(dt);
        return A::average(lie_sf(f, s), lie_fs(f, s));
      }
    }
  } else {
    switch (spec.kind) {
      case Composition::LieSF:
        return lie_sf(fast(h_sub), slow(h_sub));
      case Composition::LieFS:
        return lie_fs(fast(h_sub), slow(h_sub));
      case Composition::StrangSFS: {
        const Flow s_half = slow(h_sub / Time(2));
        return A::compose(s_half, A::compose(fast(h_sub), s_half));
      }
      case Composition::StrangFSF: {
        const Flow f_half = fast(h_sub / Time(2));
        return A::compose(f_half, A::compose(slow(h_sub), f_half));
      }
      case Composition::Weighted: {
        const Flow f = fast(h_sub);
        const Flow s = slow(h_sub);
        return A::average(lie_sf(f, s), lie_fs(f, s));
      }
    }
  }
  throw InvalidArgument("unknown composition kind");
}

/// Composite map over one full step dt (non-subcycled kinds repeat their substep N times).
template <class Flow, class Time, class FastFactory, class SlowFactory>
Flow compose_flows(const SchemeSpec& spec, const FastFactory& fast, const SlowFactory& slow,
                   const Time& dt) {
  if (!(dt > Time(0))) throw InvalidArgument("compose_flows: dt must be positive");
  Flow base = compose_substep<Flow>(spec, fast, slow, dt);
  if (spec.subcycled) return base;
  return FlowAlgebra<Flow>::power(base, spec.n_ratio);
}

// ---------------------------------------------------------------------------
// Stability.

/// Largest single step h of a theta-scheme at the given rate with |amplification| < 1.
double theta_step_bound(double theta, double rate);

/// Largest single step h keeping the amplification factor strictly positive.
double positivity_step_bound(double theta, double rate);

/// Upper end of the stability interval (0, h) of a scheme on the 2x2 models.
/// Every substep is checked with its own length and rate.
double ode_stability_interval(const SchemeSpec& spec, double c);

/// The uniform CFL bound 1 / (c + extra_stiffness) of the reaction-diffusion model.
double pde_stability_interval(double c, double extra_stiffness);

/// Dispatches to the PDE bound when extra_stiffness > 0, to the ODE bound otherwise.
double stability_interval(const SchemeSpec& spec, double c, double extra_stiffness);

}  // namespace subcycle
