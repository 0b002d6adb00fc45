// Copyright 2026 The sdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// Longitudinal motion along a path: the constant-acceleration model the
/// safety layer plans with, and a first-order-lag plant that realizes
/// commands imperfectly.

#include <cmath>
#include <stdexcept>

namespace sdsim {

template <typename Scalar>
struct AgentState {
  Scalar s = Scalar(0);          ///< arclength on the bound path [m]
  Scalar v = Scalar(0);          ///< speed along the path [m/s], >= 0
  Scalar a_applied = Scalar(0);  ///< acceleration the plant realizes [m/s^2]
  Scalar t = Scalar(0);          ///< simulation time [s]
};

template <typename Scalar>
struct ModelParams {
  Scalar a_max = Scalar(3.5);
  Scalar a_brake_peak = Scalar(8);
  Scalar brake_fraction = Scalar(0.9);
  Scalar v_max = Scalar(40);

  /// Deceleration magnitude the model assumes for a full stop.
  Scalar model_decel() const { return brake_fraction * a_brake_peak; }
};

template <typename Scalar>
struct PlantParams {
  Scalar actuation_lag_tau = Scalar(0.3);
  Scalar a_brake_peak = Scalar(8);
};

template <typename Scalar>
Scalar stopping_distance(Scalar v, Scalar decel_mag) {
  if (!(decel_mag > Scalar(0))) {
    throw std::domain_error("stopping_distance: decel_mag must be > 0");
  }
  return v * v / (Scalar(2) * decel_mag);
}

namespace detail {

// Holds `a` constant for `dt`. A braking step that would reverse the agent
// ends exactly at v = 0 and the remainder of the tick is spent at rest.
template <typename Scalar>
void integrate_constant(AgentState<Scalar>& x, Scalar a, Scalar dt) {
  const Scalar v_end = x.v + a * dt;
  if (a < Scalar(0) && v_end <= Scalar(0)) {
    x.s += x.v * x.v / (Scalar(-2) * a);
    x.v = Scalar(0);
  } else {
    x.s += x.v * dt + Scalar(0.5) * a * dt * dt;
    x.v = v_end;
  }
  x.t += dt;
}

}  // namespace detail

/// Exact constant-acceleration update with braking saturation.
template <typename Scalar>
AgentState<Scalar> predict_model(const AgentState<Scalar>& state, Scalar a,
                                 Scalar dt) {
  if (!(dt > Scalar(0))) throw std::domain_error("predict_model: dt <= 0");
  AgentState<Scalar> next = state;
  next.a_applied = a;
  detail::integrate_constant(next, a, dt);
  return next;
}

/// Advances the lag filter with its exact exponential solution, then
/// integrates the realized acceleration held over the tick. tau == 0
/// reduces to predict_model.
template <typename Scalar>
AgentState<Scalar> step_plant(const AgentState<Scalar>& state, Scalar a_cmd,
                              Scalar dt, const PlantParams<Scalar>& plant) {
  if (!(dt > Scalar(0))) throw std::domain_error("step_plant: dt <= 0");
  if (plant.actuation_lag_tau < Scalar(0)) {
    throw std::domain_error("step_plant: actuation_lag_tau < 0");
  }
  AgentState<Scalar> next = state;
  if (plant.actuation_lag_tau == Scalar(0)) {
    next.a_applied = a_cmd;
  } else {
    const Scalar gain = -std::expm1(-dt / plant.actuation_lag_tau);
    next.a_applied = state.a_applied + (a_cmd - state.a_applied) * gain;
  }
  detail::integrate_constant(next, next.a_applied, dt);
  return next;
}

using AgentStated = AgentState<double>;
using ModelParamsd = ModelParams<double>;
using PlantParamsd = PlantParams<double>;

}  // namespace sdsim
