#pragma once

#include <stdexcept>
#include <string>

namespace hybtail {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument / domain violations.
class DomainError : public Error { public: using Error::Error; };

// Model geometry: the implied first junction would sit above the tail threshold.
class InvalidGeometry : public Error { public: using Error::Error; };
class DegenerateJunction : public Error { public: using Error::Error; };

// Data problems.
class EmptyData : public Error { public: using Error::Error; };
class DegenerateRange : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class EmptySeries : public Error { public: using Error::Error; };

// Solver failures.
class NonFiniteResidual : public Error { public: using Error::Error; };
class SingularNormalEquations : public Error { public: using Error::Error; };
class AllStepsFailed : public Error { public: using Error::Error; };

// Estimator failures.
class NoTailPoints : public Error { public: using Error::Error; };
class NonPositiveThresholdStatistic : public Error { public: using Error::Error; };
class DegenerateMoments : public Error { public: using Error::Error; };
class NoInteriorMaximum : public Error { public: using Error::Error; };
class NoValidCandidate : public Error { public: using Error::Error; };

// Monte-Carlo aggregation.
class ZeroVariance : public Error { public: using Error::Error; };
class NonFiniteDensity : public Error { public: using Error::Error; };
class TooManyFailedReplicates : public Error { public: using Error::Error; };

}  // namespace hybtail
