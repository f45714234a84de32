#pragma once

#include <stdexcept>
#include <string>

namespace spinpair {

// Base class for all failures raised by the simulator itself, as opposed to
// plain std::invalid_argument for malformed inputs.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonHermitianObservable : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class UnsupportedOffResonance : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class ClosureViolation : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class ReductionLeak : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class StepSizeUnderflow : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class NonFiniteState : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class InvalidM0 : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class DegenerateParams : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class RankError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class NeverLocks : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

}  // namespace spinpair
