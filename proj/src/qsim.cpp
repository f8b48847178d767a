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

#include "gfoq/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfoq/error.hpp"

namespace gfoq::qsim {

namespace {

constexpr Complex kI{0.0, 1.0};

Mat2 make(Complex a, Complex b, Complex c, Complex d) { return Mat2{{a, b, c, d}}; }

} // namespace

Mat2 Mat2::identity() { return make(1.0, 0.0, 0.0, 1.0); }
Mat2 Mat2::pauli_x() { return make(0.0, 1.0, 1.0, 0.0); }
Mat2 Mat2::pauli_y() { return make(0.0, -kI, kI, 0.0); }
Mat2 Mat2::pauli_z() { return make(1.0, 0.0, 0.0, -1.0); }

Mat2 Mat2::adjoint() const
{
    return make(std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3]));
}

Complex Mat2::trace() const { return e[0] + e[3]; }

Mat2 operator*(const Mat2 &a, const Mat2 &b)
{
    Mat2 r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
        }
    }
    return r;
}

Mat2 operator+(const Mat2 &a, const Mat2 &b)
{
    Mat2 r;
    for (std::size_t k = 0; k < 4; ++k) {
        r.e[k] = a.e[k] + b.e[k];
    }
    return r;
}

Mat2 operator-(const Mat2 &a, const Mat2 &b)
{
    Mat2 r;
    for (std::size_t k = 0; k < 4; ++k) {
        r.e[k] = a.e[k] - b.e[k];
    }
    return r;
}

Mat2 operator*(Complex s, const Mat2 &a)
{
    Mat2 r;
    for (std::size_t k = 0; k < 4; ++k) {
        r.e[k] = s * a.e[k];
    }
    return r;
}

double max_abs_diff(const Mat2 &a, const Mat2 &b)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        worst = std::max(worst, std::abs(a.e[k] - b.e[k]));
    }
    return worst;
}

bool is_hermitian(const Mat2 &m, double tol) { return max_abs_diff(m, m.adjoint()) <= tol; }

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix() : m_(make(1.0, 0.0, 0.0, 0.0)) {}

DensityMatrix DensityMatrix::ground() { return {}; }

DensityMatrix DensityMatrix::excited() { return {Unchecked{}, make(0.0, 0.0, 0.0, 1.0)}; }

DensityMatrix DensityMatrix::maximally_mixed() { return {Unchecked{}, make(0.5, 0.0, 0.0, 0.5)}; }

DensityMatrix DensityMatrix::pure(Complex a, Complex b)
{
    const double norm = std::norm(a) + std::norm(b);
    if (!(std::abs(norm - 1.0) <= kStateTolerance)) {
        throw DomainError("pure state amplitudes are not normalized");
    }
    return {Unchecked{}, make(a * std::conj(a), a * std::conj(b), b * std::conj(a), b * std::conj(b))};
}

DensityMatrix DensityMatrix::from_matrix(const Mat2 &m)
{
    for (const auto &z : m.e) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw DomainError("density matrix has non-finite entries");
        }
    }
    if (!is_hermitian(m)) {
        throw DomainError("density matrix is not Hermitian");
    }
    const Complex tr = m.trace();
    if (std::abs(tr - 1.0) > kStateTolerance) {
        throw DomainError("density matrix trace is not 1");
    }
    // Eigenvalues of a 2x2 Hermitian matrix: (tr +- sqrt((a-d)^2 + 4|b|^2)) / 2.
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double gap = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(m(0, 1)));
    if ((a + d - gap) / 2.0 < -kPsdTolerance) {
        throw DomainError("density matrix is not positive semidefinite");
    }
    return {Unchecked{}, m};
}

// --- Observable --------------------------------------------------------------

Observable::Observable(const Mat2 &m) : m_(m)
{
    if (!is_hermitian(m)) {
        throw DomainError("observable is not Hermitian");
    }
}

Observable Observable::projector(int basis_state)
{
    if (basis_state == 0) {
        return Observable(make(1.0, 0.0, 0.0, 0.0));
    }
    if (basis_state == 1) {
        return Observable(make(0.0, 0.0, 0.0, 1.0));
    }
    throw DomainError("projector basis state must be 0 or 1");
}

Observable Observable::pauli_z() { return Observable(Mat2::pauli_z()); }

// --- Noise -------------------------------------------------------------------

std::string_view to_string(NoiseKind kind)
{
    switch (kind) {
    case NoiseKind::None:
        return "none";
    case NoiseKind::BitFlip:
        return "bitflip";
    case NoiseKind::Depolarizing:
        return "depolarizing";
    case NoiseKind::PhaseDamping:
        return "phasedamping";
    case NoiseKind::PhaseFlip:
        return "phaseflip";
    case NoiseKind::AmplitudeDamping:
        return "amplitudedamping";
    }
    return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name)
{
    for (auto kind : {NoiseKind::None, NoiseKind::BitFlip, NoiseKind::Depolarizing,
                      NoiseKind::PhaseDamping, NoiseKind::PhaseFlip, NoiseKind::AmplitudeDamping}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw DomainError("unknown noise kind '" + std::string(name) + "'");
}

NoiseChannel::NoiseChannel(NoiseKind kind, double probability) : kind_(kind), probability_(probability)
{
    if (!(probability >= 0.0 && probability <= 1.0)) {
        std::ostringstream msg;
        msg << "noise probability " << probability << " is outside [0, 1]";
        throw DomainError(msg.str());
    }
}

std::vector<Mat2> NoiseChannel::kraus() const
{
    const double p = probability_;
    const Complex keep = std::sqrt(1.0 - p);
    switch (kind_) {
    case NoiseKind::None:
        return {Mat2::identity()};
    case NoiseKind::BitFlip:
        return {keep * Mat2::identity(), Complex(std::sqrt(p)) * Mat2::pauli_x()};
    case NoiseKind::PhaseFlip:
        return {keep * Mat2::identity(), Complex(std::sqrt(p)) * Mat2::pauli_z()};
    case NoiseKind::Depolarizing: {
        const Complex third = std::sqrt(p / 3.0);
        return {keep * Mat2::identity(), third * Mat2::pauli_x(), third * Mat2::pauli_y(),
                third * Mat2::pauli_z()};
    }
    case NoiseKind::AmplitudeDamping:
        return {make(1.0, 0.0, 0.0, keep), make(0.0, std::sqrt(p), 0.0, 0.0)};
    case NoiseKind::PhaseDamping:
        return {make(1.0, 0.0, 0.0, keep), make(0.0, 0.0, 0.0, std::sqrt(p))};
    }
    return {Mat2::identity()};
}

// --- Evolution and measurement -------------------------------------------------

Mat2 rx_matrix(double phi)
{
    if (!std::isfinite(phi)) {
        throw DomainError("rotation angle must be finite");
    }
    const double c = std::cos(phi / 2.0);
    const double s = std::sin(phi / 2.0);
    return make(c, -kI * s, -kI * s, c);
}

DensityMatrix rx_density(double phi, const DensityMatrix &rho)
{
    const Mat2 u = rx_matrix(phi);
    return {DensityMatrix::Unchecked{}, u * rho.matrix() * u.adjoint()};
}

DensityMatrix apply_channel(const NoiseChannel &channel, const DensityMatrix &rho)
{
    if (channel.kind() == NoiseKind::None) {
        return rho;
    }
    Mat2 out;
    for (const Mat2 &k : channel.kraus()) {
        out = out + k * rho.matrix() * k.adjoint();
    }
    return {DensityMatrix::Unchecked{}, out};
}

double expectation(const Observable &obs, const DensityMatrix &rho)
{
    const Complex tr = (obs.matrix() * rho.matrix()).trace();
    if (std::abs(tr.imag()) >= kImaginaryTolerance) {
        throw DomainError("expectation value has a non-negligible imaginary part");
    }
    return tr.real();
}

BasisCounts sample_basis(const DensityMatrix &rho, std::uint64_t shots, std::mt19937_64 &rng)
{
    if (shots == 0) {
        throw DomainError("shots must be at least 1");
    }
    const double p0 = std::clamp(rho.p0(), 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(shots, p0);
    const std::uint64_t zeros = draw(rng);
    return {zeros, shots - zeros};
}

} // namespace gfoq::qsim
