#pragma once

#include <stdexcept>
#include <string>

namespace trop {

// Numeric / algebraic domain violations (bad beta, mode mismatch, singular
// sigma, ...). The CLI maps these to exit code 3.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// An operator failed its declared Rota-Baxter identity on sampled inputs,
// or a factorization certificate did not hold. Exit code 4.
struct CertificationError : std::runtime_error {
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration cap was exceeded (coproduct subsets, point-counting grid,
// family size). Exit code 5.
struct CapError : std::runtime_error {
    explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trop
