#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace slq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Thrown when a spectral parameter lands outside the resolvent set, a
/// contour search degenerates, or a similar numerical condition fails.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by the config parser; carries the offending field in the message.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// sigma_max / sigma_min; +inf when sigma_min underflows to zero.
double condition_number(const Matrix& m);

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

} // namespace slq
