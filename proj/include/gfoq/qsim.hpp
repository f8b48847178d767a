// Copyright 2026 The gfoq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/** @file
 * Exact single-qubit density-matrix simulation.
 *
 * A state is a 2x2 Hermitian, unit-trace, positive semidefinite matrix. The
 * only gate is the X rotation R_X(phi) = exp(-i phi X / 2); noise is a single
 * Kraus channel applied after it. Expectations are exact traces; shot sampling
 * is available separately for finite-measurement experiments.
 *
 * Depolarizing noise follows the Pauli-mixture convention
 *   (1-p) I, p/3 X, p/3 Y, p/3 Z,
 * so the channel is maximally mixing at p = 3/4, not at p = 1.
 */

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace gfoq::qsim {

using Complex = std::complex<double>;

/// Tolerance for Hermiticity, unit trace and Kraus completeness.
inline constexpr double kStateTolerance = 1e-12;
/// Smallest eigenvalue accepted as positive semidefinite.
inline constexpr double kPsdTolerance = 1e-12;
/// Largest imaginary part of Tr(M rho) silently discarded by expectation().
inline constexpr double kImaginaryTolerance = 1e-10;

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
    std::array<Complex, 4> e{};

    constexpr Complex &operator()(int row, int col) { return e[2 * row + col]; }
    constexpr const Complex &operator()(int row, int col) const { return e[2 * row + col]; }

    static Mat2 identity();
    static Mat2 pauli_x();
    static Mat2 pauli_y();
    static Mat2 pauli_z();

    Mat2 adjoint() const;
    Complex trace() const;

    friend Mat2 operator*(const Mat2 &a, const Mat2 &b);
    friend Mat2 operator+(const Mat2 &a, const Mat2 &b);
    friend Mat2 operator-(const Mat2 &a, const Mat2 &b);
    friend Mat2 operator*(Complex s, const Mat2 &a);
};

/// Largest elementwise modulus of a - b.
double max_abs_diff(const Mat2 &a, const Mat2 &b);
bool is_hermitian(const Mat2 &m, double tol = kStateTolerance);

class NoiseChannel;

/// Single-qubit state. Construction through from_matrix() checks Hermiticity,
/// unit trace and positive semidefiniteness.
class DensityMatrix {
  public:
    /// |0><0|.
    DensityMatrix();

    static DensityMatrix ground();
    static DensityMatrix excited();
    static DensityMatrix maximally_mixed();
    /// |psi><psi| for a normalized pure state a|0> + b|1>.
    static DensityMatrix pure(Complex a, Complex b);
    /// Throws DomainError if `m` violates any state invariant.
    static DensityMatrix from_matrix(const Mat2 &m);

    const Mat2 &matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }
    /// Probability of measuring |0> in the computational basis.
    double p0() const { return m_(0, 0).real(); }

  private:
    struct Unchecked {};
    DensityMatrix(Unchecked, const Mat2 &m) : m_(m) {}
    friend DensityMatrix rx_density(double, const DensityMatrix &);
    friend DensityMatrix apply_channel(const NoiseChannel &, const DensityMatrix &);

    Mat2 m_;
};

/// Hermitian measurement operator.
class Observable {
  public:
    /// Throws DomainError unless `m` is Hermitian within kStateTolerance.
    explicit Observable(const Mat2 &m);

    static Observable projector(int basis_state);
    static Observable pauli_z();

    const Mat2 &matrix() const { return m_; }

  private:
    Mat2 m_;
};

enum class NoiseKind { None, BitFlip, Depolarizing, PhaseDamping, PhaseFlip, AmplitudeDamping };

inline constexpr std::array<NoiseKind, 5> kNoisyKinds{
    NoiseKind::BitFlip, NoiseKind::Depolarizing, NoiseKind::PhaseDamping, NoiseKind::PhaseFlip,
    NoiseKind::AmplitudeDamping};

/// Lower-case configuration name ("none", "bitflip", "depolarizing", ...).
std::string_view to_string(NoiseKind kind);
/// Inverse of to_string(); throws DomainError on an unknown name.
NoiseKind parse_noise_kind(std::string_view name);

class NoiseChannel {
  public:
    /// The identity channel.
    NoiseChannel() = default;
    /// Throws DomainError if probability is not a finite value in [0, 1].
    NoiseChannel(NoiseKind kind, double probability);

    static NoiseChannel none() { return {}; }

    NoiseKind kind() const { return kind_; }
    double probability() const { return probability_; }

    /// Kraus operators {K_k} with sum_k K_k^dag K_k = I.
    std::vector<Mat2> kraus() const;

    friend bool operator==(const NoiseChannel &, const NoiseChannel &) = default;

  private:
    NoiseKind kind_ = NoiseKind::None;
    double probability_ = 0.0;
};

/// Matrix of R_X(phi). Throws DomainError for non-finite phi.
Mat2 rx_matrix(double phi);

/// R_X(phi) rho R_X(phi)^dag.
DensityMatrix rx_density(double phi, const DensityMatrix &rho);

/// sum_k K_k rho K_k^dag.
DensityMatrix apply_channel(const NoiseChannel &channel, const DensityMatrix &rho);

/// Re Tr(M rho). Throws DomainError if the imaginary part exceeds
/// kImaginaryTolerance, which cannot happen for valid inputs.
double expectation(const Observable &obs, const DensityMatrix &rho);

struct BasisCounts {
    std::uint64_t zeros = 0;
    std::uint64_t ones = 0;

    friend bool operator==(const BasisCounts &, const BasisCounts &) = default;
};

/// Draws `shots` computational-basis measurements. Throws DomainError when
/// shots is zero.
BasisCounts sample_basis(const DensityMatrix &rho, std::uint64_t shots, std::mt19937_64 &rng);

} // namespace gfoq::qsim
