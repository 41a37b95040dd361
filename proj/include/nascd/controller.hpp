#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nascd/lti.hpp"

namespace nascd {

/// Discrete-time controller as a difference equation
///   u_k = sum_i b[i] e_{k-i} - sum_j a[j] u_{k-j-1}
/// with normalized (implicit unity) leading denominator coefficient.
struct DiscreteController {
  std::vector<double> b;  // feedforward b_0..b_m, non-empty
  std::vector<double> a;  // feedback a_1..a_n (may be empty)
  double h = 0.0;         // sample period, seconds
};

/// Bilinear (trapezoidal) discretization s <- (2/h)(z-1)/(z+1). Preserves
/// the DC gain exactly when c(0) is finite. Throws ImproperTransferFunction
/// for improper c, InvalidRange for h <= 0, Error when c has a pole at 2/h
/// (the bilinear singularity).
[[nodiscard]] DiscreteController discretize(const TransferFunction& c, double h);

/// Difference-equation memory for one mode: most-recent-first histories of
/// inputs and outputs.
struct ModeMemory {
  std::vector<double> e_hist;
  std::vector<double> u_hist;
};

/// Machine state passed by value through step(): per-mode memories (modes
/// keep their own memory across switches), the active mode, and the last
/// observed interface variables.
struct MachineState {
  std::vector<ModeMemory> memory;
  std::size_t active_mode = 0;
  double last_sensor = 0.0;
  double last_delay = 0.0;  // delay-sample input, logged but not acted on
  double last_output = 0.0;
};

/// Sensor-read and actuator-write bindings, the machine's I/O interface
/// functions. The owner of the loop installs these per run.
struct MachineIo {
  std::function<double()> read_sensor;
  std::function<void(double)> write_actuator;
};

/// Switching discrete-time controller: a Mealy machine whose output function
/// dispatches to a per-channel-state controller bank. Deterministic given
/// (inputs, state); no hidden mutation, state is a value in and a value out.
class MealySwitchingController {
 public:
  MealySwitchingController(std::vector<std::pair<std::string, DiscreteController>> bank,
                           std::string initial_state, std::string id = "M",
                           double default_reference = 0.0);

  [[nodiscard]] const std::string& id() const { return id_; }
  [[nodiscard]] std::size_t mode_count() const { return bank_.size(); }
  [[nodiscard]] const std::string& mode_label(std::size_t i) const { return bank_.at(i).first; }
  [[nodiscard]] const DiscreteController& mode(std::size_t i) const { return bank_.at(i).second; }
  /// Throws UnknownChannelState for labels outside the bank.
  [[nodiscard]] std::size_t mode_index(std::string_view label) const;
  [[nodiscard]] bool covers(std::string_view label) const;
  [[nodiscard]] const std::string& initial_state() const { return initial_state_; }
  [[nodiscard]] double default_reference() const { return default_reference_; }

  /// All controller memories zeroed, active mode set to the declared initial
  /// channel state. Idempotent.
  [[nodiscard]] MachineState initialize() const;

  struct StepResult {
    double output = 0.0;
    MachineState state;
  };

  /// One controller step: select the mode for channel_state, form the error
  /// reference - sensor, and advance that mode's difference equation. The
  /// delay sample is recorded in the state but does not alter the control
  /// law; mode switching is keyed to the channel state alone.
  [[nodiscard]] StepResult step(const MachineState& state, double sensor,
                                std::string_view channel_state, double delay_sample,
                                double reference) const;
  [[nodiscard]] StepResult step(const MachineState& state, double sensor,
                                std::string_view channel_state, double delay_sample) const {
    return step(state, sensor, channel_state, delay_sample, default_reference_);
  }

  /// Sampling interface function: reads the sensor binding.
  [[nodiscard]] double sample(const MachineIo& io) const { return io.read_sensor(); }
  /// Actuation interface function: writes the command to the actuator binding.
  void actuate(const MachineIo& io, double command) const { io.write_actuator(command); }

 private:
  std::vector<std::pair<std::string, DiscreteController>> bank_;
  std::string initial_state_;
  std::string id_;
  double default_reference_;
};

/// Builds the switching controller from a continuous-time bank, discretizing
/// each entry with the bilinear transform at period h.
[[nodiscard]] MealySwitchingController make_switching_controller(
    const std::vector<std::pair<std::string, TransferFunction>>& bank, double h,
    std::string initial_state, std::string id = "M", double default_reference = 0.0);

}  // namespace nascd
