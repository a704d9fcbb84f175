#pragma once

#include <stdexcept>
#include <string>

namespace lipdp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (dimension mismatch, off-manifold
/// point, malformed multi-index, bad mesh, ...).
struct InvalidInput : Error {
    using Error::Error;
};

/// Configuration file / CLI parameter problem; carries field or line context.
struct ConfigError : Error {
    using Error::Error;
};

/// A chart was requested at a nonregular manifold point (a vertex).
struct NonregularPoint : Error {
    using Error::Error;
};

/// The sampled admissible control set is empty: either U(x) is empty or the
/// control mesh is too coarse. Callers may retry with a halved mesh.
struct EmptyAdmissible : Error {
    using Error::Error;
};

/// No coordinate selection makes the chart differential invertible at some
/// sampled feasible control; the message carries the witness point.
struct NoInvertibleProjection : Error {
    using Error::Error;
};

/// Fixed-point iteration did not reach the residual tolerance.
struct NoConvergence : Error {
    using Error::Error;
};

/// A fixed-point iterate left the certified ball.
struct LeftBall : Error {
    using Error::Error;
};

struct SingularJacobian : Error {
    using Error::Error;
};

/// Dynamics left the next-stage state region beyond the clamp tolerance.
struct OutOfRegion : Error {
    using Error::Error;
};

/// A sample point left the domain of the function being probed.
struct DomainViolation : Error {
    using Error::Error;
};

}  // namespace lipdp
