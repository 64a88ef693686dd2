#pragma once

// Numerical checks of the analytic machinery: Hilbert-Schmidt norm of the weighted free resolvent,
// Kato-smoothness time integrals, Mourre commutator positivity and limiting-absorption stability.

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "scatterlab/execution.hpp"
#include "scatterlab/potentials.hpp"
#include "scatterlab/propagator.hpp"

namespace scatterlab::diagnostics {

// H = -Delta_h + v on x_j = (j - (n - 1)/2) h with Dirichlet ends, v(x) = v(|x|).
struct DiscretizedOperator {
    double h = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd potential;

    static DiscretizedOperator build(const PotentialModel& model, int n, double h);
    int size() const { return static_cast<int>(x.size()); }
    Eigen::MatrixXd kinetic() const;  // -Delta_h
    Eigen::MatrixXd matrix() const;   // -Delta_h + diag(v)
    double max_kinetic_eigenvalue() const { return 4.0 / (h * h); }
};

// A = -i (D X + X D) with D the centered difference and X = diag(x).
struct DilationGenerator {
    Eigen::MatrixXcd matrix;
    static DilationGenerator build(const DiscretizedOperator& op);
};

// max |M - M^*| entrywise, relative to max |M|.
double hermitian_defect(const Eigen::MatrixXcd& m);

// ||(H0 + c)^{-1} |V|^{1/2}||_HS^2 in three dimensions = (2 pi)^{-3} ||v||_1 int (|xi|^2 + c)^{-2} dxi.
// Throws DomainError when v is not integrable.
double hs_norm_resolvent_weight(const PotentialModel& model, double c);

struct KatoReport {
    std::vector<double> times;
    std::vector<double> integrals;  // I(T) / ||f||^2
    double last_growth = 0.0;       // I(T_last) / I(T_prev) - 1
    bool saturating = false;        // last_growth < 1%
    bool valid = true;              // false if the free packet reached the edge band
};

// I(T) = int_0^T ||<x>^{-r} e^{-i H0 t} f||^2 dt on the packet's line grid.
KatoReport kato_smoothness_integral(double r, const propagator::WavePacket& f, const std::vector<double>& times,
                                    Execution exec = Execution::parallel);

struct MourreReport {
    double min_eigenvalue = 0.0;         // of E(I) i[H, A] E(I) with the symbolic commutator
    double matrix_commutator_min = 0.0;  // same with the exact matrix commutator (diagonal vanishes)
    int window_count = 0;
    double h = 0.0;
};

// i[H, A] = 4(-Delta) - 2 x v'(x) realized on the grid and projected onto the eigenvectors of H in
// [lambda1, lambda2]. box_length fixes h = box_length / n.
MourreReport mourre_check(const PotentialModel& model, std::pair<double, double> window, int n,
                          double box_length = 300.0);

struct LapSettings {
    int n = 1024;
    double h = 1.0;
};

struct LapReport {
    std::vector<double> epsilons;
    std::vector<double> norms;
    double relative_change = 0.0;  // between the last two epsilons
    bool stable = false;           // relative_change < 5%
    bool monotone = false;         // norms non-decreasing as epsilon decreases
};

// ||<x>^{-r} (H - lambda - i eps)^{-1} <x>^{-r}|| on a window closed by the exact free-lattice
// self-energy (outgoing condition), largest singular value per eps.
LapReport lap_probe(const PotentialModel& model, double lambda, double r, const std::vector<double>& epsilons,
                    const LapSettings& settings = {}, Execution exec = Execution::parallel);

}  // namespace scatterlab::diagnostics
