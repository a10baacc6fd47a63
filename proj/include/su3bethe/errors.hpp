#ifndef SU3BETHE_ERRORS_HPP
#define SU3BETHE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace su3bethe {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A kernel or prefactor was evaluated at one of its poles.
struct PoleError : Error {
    explicit PoleError(const std::string& what) : Error(what) {}
};

/// Float determinant is numerically singular beyond tolerance.
struct SingularError : Error {
    explicit SingularError(const std::string& what) : Error(what) {}
};

/// Cardinality vector does not sum to the set size.
struct CardinalityError : Error {
    explicit CardinalityError(const std::string& what) : Error(what) {}
};

/// A point appears in two root sets with inconsistent required r-values.
struct ConflictError : Error {
    explicit ConflictError(const std::string& what) : Error(what) {}
};

/// The configuration is degenerate (e.g. the zero-eigenvector request in the norm case).
struct DegenerateError : Error {
    explicit DegenerateError(const std::string& what) : Error(what) {}
};

/// Requested size exceeds a combinatorial guard.
struct SizeError : Error {
    explicit SizeError(const std::string& what) : Error(what) {}
};

/// Iterative solver failed to converge.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

/// Two roots merged below the separation threshold.
struct CollisionError : Error {
    explicit CollisionError(const std::string& what) : Error(what) {}
};

} // namespace su3bethe

#endif
