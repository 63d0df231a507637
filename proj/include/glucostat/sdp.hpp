#pragma once

// Self-contained dense semidefinite solver for small LMI problems.
//
// Problems are stated as symmetric/rectangular/scalar decision variables
// plus affine matrix-inequality constraints. Constraints are supplied as
// evaluation callbacks and compiled by probing into per-unknown coefficient
// matrices. Solving uses phase-1 feasibility-margin maximization (a log-det
// barrier interior-point method with Newton steps and backtracking line
// search) and bisection on the scalar objective. Infeasibility is declared
// when the maximum achievable margin is below -tol.
//
// Scale: intended for blocks up to ~15x15 and a few hundred scalar
// unknowns. Everything is dense.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace glucostat::sdp {

struct SymEig {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // orthonormal columns, A * V = V * diag(values)
};

/// Cyclic-Jacobi eigendecomposition of a symmetric matrix. Rejects inputs
/// that are not symmetric to 1e-12 relative.
SymEig sym_eig(const Eigen::MatrixXd& a);

enum class VarKind { kSymmetric, kRectangular, kScalar };

struct VarSpec {
    VarKind kind = VarKind::kScalar;
    int rows = 1;
    int cols = 1;
    int offset = 0; // first scalar unknown
    int count = 0;  // number of scalar unknowns
};

/// Required side of a constraint block.
enum class Sense {
    kNegSemidef, // block(w) <= 0
    kPosSemidef  // block(w) >= 0
};

class LmiProblem {
public:
    /// Declare variables first; constraints are compiled against the full
    /// unknown vector when added.
    int add_symmetric(int n);
    int add_rectangular(int rows, int cols);
    int add_scalar();

    int num_unknowns() const { return num_unknowns_; }
    const std::vector<VarSpec>& variables() const { return vars_; }

    /// Materialize a variable from the packed unknown vector.
    Eigen::MatrixXd value(int var, const Eigen::VectorXd& w) const;
    /// Write a variable's entries into the packed unknown vector.
    void set_value(int var, const Eigen::MatrixXd& m, Eigen::VectorXd& w) const;

    /// Register an affine constraint block. `eval` must return a symmetric
    /// matrix and be affine in the unknowns; it is probed once per scalar
    /// unknown to extract coefficient matrices.
    void add_constraint(std::string family, Sense sense,
                        const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& eval);

    /// Linear objective c.w to minimize; empty = pure feasibility problem.
    void set_objective(const Eigen::VectorXd& c);
    /// Convenience: minimize a single scalar variable.
    void set_objective_scalar(int var);
    const Eigen::VectorXd& objective() const { return objective_; }

    struct Block {
        std::string family;
        int dim = 0;
        Sense sense = Sense::kNegSemidef;
        Eigen::MatrixXd f0;
        std::vector<int> active;            // unknowns with nonzero coefficient
        std::vector<Eigen::MatrixXd> coeff; // parallel to `active`
        double scale = 1.0;                 // normalization used internally
    };
    const std::vector<Block>& blocks() const { return blocks_; }

    /// Block value F(w) in natural (unnormalized) units.
    Eigen::MatrixXd block_value(const Block& b, const Eigen::VectorXd& w) const;

private:
    std::vector<VarSpec> vars_;
    std::vector<Block> blocks_;
    Eigen::VectorXd objective_;
    int num_unknowns_ = 0;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kMaxIterations };

std::string to_string(SolveStatus s);

struct SolveOptions {
    double tol = 1e-6;        // margin tolerance and relative objective tolerance
    int max_iter = 500;       // Newton iteration budget per feasibility query
    double var_bound = 1e6;   // box |w_j| <= var_bound keeping iterates compact
    double margin_cap = 1.0;  // phase-1 margins are maximized up to this cap
};

struct SdpSolution {
    Eigen::VectorXd w;
    SolveStatus status = SolveStatus::kInfeasible;
    double margin = 0.0;      // min satisfied-side eigenvalue slack over constraints
    std::string worst_family; // constraint family attaining the margin
    double objective = 0.0;   // c.w at the returned point (0 for feasibility problems)
    int iterations = 0;       // total Newton iterations across all queries
    int queries = 0;          // feasibility queries issued
};

/// Solve the problem: feasibility when no objective is set, otherwise
/// bisection on the objective value with each query answered by phase-1
/// margin maximization. Returned optimal/feasible points always satisfy
/// every block strictly at the solver's working tolerance; an exhausted
/// iteration budget is reported as kMaxIterations with the best iterate
/// attached, never as a silent wrong answer.
SdpSolution solve(const LmiProblem& problem, const SolveOptions& opts = {});

struct MarginReport {
    double min_margin = 0.0;
    std::string worst_family;
    std::vector<std::pair<std::string, double>> entries; // family -> margin
};

/// Per-constraint extreme eigenvalue on the required side, computed with
/// sym_eig only and independent of the solve path.
MarginReport check_assignment(const LmiProblem& problem, const Eigen::VectorXd& w);

} // namespace glucostat::sdp
