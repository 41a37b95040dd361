#include "nascd/controller.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

#include "nascd/errors.hpp"

namespace nascd {

namespace {

// Singularity guard for the bilinear substitution, relative to the summed
// coefficient magnitude at s = 2/h.
constexpr double kSingularTol = 1e-9;

// p(s) composed with s = (2/h)(z-1)/(z+1) and multiplied through by
// (z+1)^order, as a polynomial in z. order may exceed deg p so numerator and
// denominator share the same clearing factor.
Polynomial bilinear_lift(const Polynomial& p, double two_over_h, int order) {
  const Polynomial zm1({-1.0, 1.0});
  const Polynomial zp1({1.0, 1.0});
  Polynomial acc;
  for (int i = 0; i <= order; ++i) {
    const double ci = p.coeff(static_cast<std::size_t>(i));
    if (ci == 0.0) continue;
    Polynomial term({ci * std::pow(two_over_h, i)});
    for (int j = 0; j < i; ++j) term = term * zm1;
    for (int j = i; j < order; ++j) term = term * zp1;
    acc = acc + term;
  }
  return acc;
}

}  // namespace

DiscreteController discretize(const TransferFunction& c, double h) {
  if (!(h > 0.0)) throw InvalidRange("sample period h must be positive");
  if (!c.is_proper()) {
    throw ImproperTransferFunction("cannot discretize an improper transfer function");
  }

  const int n = c.den().degree();
  const double two_over_h = 2.0 / h;

  // The lifted denominator's leading coefficient equals den(2/h); it vanishes
  // exactly when the continuous controller has a pole at the bilinear
  // singularity s = 2/h.
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    scale += std::abs(c.den().coeff(static_cast<std::size_t>(i))) * std::pow(two_over_h, i);
  }
  const double lead = c.den()(two_over_h);
  if (std::abs(lead) <= kSingularTol * scale) {
    throw Error("bilinear discretization is singular: controller pole at 2/h");
  }

  const Polynomial num_z = bilinear_lift(c.num(), two_over_h, n);
  const Polynomial den_z = bilinear_lift(c.den(), two_over_h, n);

  DiscreteController d;
  d.h = h;
  d.b.resize(static_cast<std::size_t>(n) + 1);
  d.a.resize(static_cast<std::size_t>(n));
  for (int i = 0; i <= n; ++i) {
    d.b[static_cast<std::size_t>(i)] = num_z.coeff(static_cast<std::size_t>(n - i)) / lead;
  }
  for (int j = 1; j <= n; ++j) {
    d.a[static_cast<std::size_t>(j - 1)] = den_z.coeff(static_cast<std::size_t>(n - j)) / lead;
  }
  return d;
}

MealySwitchingController::MealySwitchingController(
    std::vector<std::pair<std::string, DiscreteController>> bank, std::string initial_state,
    std::string id, double default_reference)
    : bank_(std::move(bank)),
      initial_state_(std::move(initial_state)),
      id_(std::move(id)),
      default_reference_(default_reference) {
  if (bank_.empty()) throw Error("controller bank must not be empty");
  for (std::size_t i = 0; i < bank_.size(); ++i) {
    if (bank_[i].second.b.empty()) {
      throw Error("mode '" + bank_[i].first + "' has an empty feedforward vector");
    }
    for (std::size_t j = i + 1; j < bank_.size(); ++j) {
      if (bank_[i].first == bank_[j].first) {
        throw Error("duplicate mode label '" + bank_[i].first + "' in controller bank");
      }
    }
  }
  // Validates that the initial channel state is covered.
  (void)mode_index(initial_state_);
}

std::size_t MealySwitchingController::mode_index(std::string_view label) const {
  for (std::size_t i = 0; i < bank_.size(); ++i) {
    if (bank_[i].first == label) return i;
  }
  throw UnknownChannelState("channel state '" + std::string(label) +
                            "' is not covered by controller bank '" + id_ + "'");
}

bool MealySwitchingController::covers(std::string_view label) const {
  for (const auto& [name, ctrl] : bank_) {
    if (name == label) return true;
  }
  return false;
}

MachineState MealySwitchingController::initialize() const {
  MachineState s;
  s.memory.resize(bank_.size());
  for (std::size_t i = 0; i < bank_.size(); ++i) {
    const DiscreteController& c = bank_[i].second;
    s.memory[i].e_hist.assign(c.b.size() > 1 ? c.b.size() - 1 : 0, 0.0);
    s.memory[i].u_hist.assign(c.a.size(), 0.0);
  }
  s.active_mode = mode_index(initial_state_);
  return s;
}

MealySwitchingController::StepResult MealySwitchingController::step(
    const MachineState& state, double sensor, std::string_view channel_state,
    double delay_sample, double reference) const {
  const std::size_t mode = mode_index(channel_state);

  StepResult out;
  out.state = state;
  out.state.active_mode = mode;
  out.state.last_sensor = sensor;
  out.state.last_delay = delay_sample;

  const DiscreteController& c = bank_[mode].second;
  ModeMemory& mem = out.state.memory[mode];

  const double e = reference - sensor;
  double u = c.b[0] * e;
  for (std::size_t i = 1; i < c.b.size(); ++i) u += c.b[i] * mem.e_hist[i - 1];
  for (std::size_t j = 0; j < c.a.size(); ++j) u -= c.a[j] * mem.u_hist[j];

  if (!mem.e_hist.empty()) {
    for (std::size_t i = mem.e_hist.size() - 1; i > 0; --i) mem.e_hist[i] = mem.e_hist[i - 1];
    mem.e_hist[0] = e;
  }
  if (!mem.u_hist.empty()) {
    for (std::size_t j = mem.u_hist.size() - 1; j > 0; --j) mem.u_hist[j] = mem.u_hist[j - 1];
    mem.u_hist[0] = u;
  }

  out.output = u;
  out.state.last_output = u;
  return out;
}

MealySwitchingController make_switching_controller(
    const std::vector<std::pair<std::string, TransferFunction>>& bank, double h,
    std::string initial_state, std::string id, double default_reference) {
  std::vector<std::pair<std::string, DiscreteController>> discrete;
  discrete.reserve(bank.size());
  for (const auto& [label, tf] : bank) {
    discrete.emplace_back(label, discretize(tf, h));
  }
  return {std::move(discrete), std::move(initial_state), std::move(id), default_reference};
}

}  // namespace nascd
