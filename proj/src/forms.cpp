#include "findex/forms.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace findex {

SymmetricForm::SymmetricForm(const Eigen::MatrixXd& entries, double symmetry_tol)
    : symmetry_tol_(symmetry_tol) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        fail(Err::DimensionMismatch, "form matrix must be square and nonempty");
    const double defect = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (defect > symmetry_tol)
        fail(Err::DimensionMismatch,
             "symmetry defect " + std::to_string(defect) + " exceeds tolerance");
    mat_ = 0.5 * (entries + entries.transpose());
}

SymmetricForm SymmetricForm::congruent(const Eigen::MatrixXd& T) const {
    if (T.rows() != mat_.rows()) fail(Err::DimensionMismatch, "congruence dimension");
    Eigen::MatrixXd m = T.transpose() * mat_ * T;
    // exact symmetrization; T^T A T is symmetric up to rounding
    return SymmetricForm(0.5 * (m + m.transpose()), symmetry_tol_);
}

SymmetricForm SymmetricForm::direct_sum(const SymmetricForm& other) const {
    const int a = dim(), b = other.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a + b, a + b);
    m.topLeftCorner(a, a) = mat_;
    m.bottomRightCorner(b, b) = other.mat_;
    return SymmetricForm(m, std::max(symmetry_tol_, other.symmetry_tol_));
}

SymmetricForm SymmetricForm::leading_block(int d) const {
    if (d < 1 || d > dim()) fail(Err::DimensionMismatch, "leading block size");
    return SymmetricForm(mat_.topLeftCorner(d, d), symmetry_tol_);
}

double default_zero_tol(const Eigen::VectorXd& eigenvalues, int dim) {
    const double scale = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    return dim * std::numeric_limits<double>::epsilon() * scale;
}

InertiaTriple inertia(const SymmetricForm& form, double zero_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(form.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigensolver failed on dim " << form.dim()
           << ", |A|_max = " << form.matrix().cwiseAbs().maxCoeff();
        fail(Err::EigenFailure, os.str());
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();
    if (zero_tol < 0.0) zero_tol = default_zero_tol(ev, form.dim());

    InertiaTriple out;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] > zero_tol)
            ++out.n_plus;
        else if (ev[i] < -zero_tol)
            ++out.n_minus;
        else
            ++out.n_zero;
    }
    return out;
}

int signature(const SymmetricForm& form, double zero_tol) {
    return inertia(form, zero_tol).signature();
}

TruncationFamily leading_block_family(const Eigen::MatrixXd& full) {
    SymmetricForm base(full);
    return TruncationFamily{[base](int cutoff) { return base.leading_block(cutoff); }};
}

RelativeSignatureResult relative_signature(const TruncationFamily& b0_family,
                                           const TruncationFamily& b1_family,
                                           const std::vector<int>& cutoffs,
                                           double zero_tol, int stabilization_window) {
    if (cutoffs.empty()) fail(Err::DimensionMismatch, "empty cutoff schedule");
    if (stabilization_window < 1) fail(Err::DimensionMismatch, "window must be positive");
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end()))
        fail(Err::DimensionMismatch, "cutoffs must be increasing");

    // Cutoffs are independent; evaluate them in parallel and reduce in order.
    std::vector<std::future<CutoffRecord>> jobs;
    jobs.reserve(cutoffs.size());
    for (int N : cutoffs) {
        jobs.push_back(std::async(std::launch::async, [&, N]() {
            CutoffRecord rec;
            rec.cutoff = N;
            rec.inertia0 = inertia(b0_family.assemble(N), zero_tol);
            rec.inertia1 = inertia(b1_family.assemble(N), zero_tol);
            rec.skipped = rec.inertia0.n_zero > 0 || rec.inertia1.n_zero > 0;
            return rec;
        }));
    }

    RelativeSignatureResult out;
    for (auto& j : jobs) out.trace.push_back(j.get());

    std::vector<int> valid;
    for (const auto& rec : out.trace)
        if (!rec.skipped) valid.push_back(rec.d());

    if (static_cast<int>(valid.size()) < stabilization_window) {
        std::ostringstream os;
        os << "only " << valid.size() << " valid cutoffs for window " << stabilization_window;
        fail(Err::NoStabilization, os.str());
    }
    const int tail = valid.back();
    for (int i = static_cast<int>(valid.size()) - stabilization_window;
         i < static_cast<int>(valid.size()); ++i) {
        if (valid[i] != tail) {
            std::ostringstream os;
            os << "trace tail not constant:";
            for (int v : valid) os << ' ' << v;
            fail(Err::NoStabilization, os.str());
        }
    }
    out.value = tail;
    return out;
}

const char* err_name(Err e) {
    switch (e) {
        case Err::EigenFailure: return "EigenFailure";
        case Err::NoStabilization: return "NoStabilization";
        case Err::OddDifference: return "OddDifference";
        case Err::SymplecticityLost: return "SymplecticityLost";
        case Err::DegenerateMeanHessian: return "DegenerateMeanHessian";
        case Err::EndpointCrossing: return "EndpointCrossing";
        case Err::NotACrossing: return "NotACrossing";
        case Err::DegenerateEndpoint: return "DegenerateEndpoint";
        case Err::DegenerateCrossing: return "DegenerateCrossing";
        case Err::RegularityFailure: return "RegularityFailure";
        case Err::HalfIntegerResult: return "HalfIntegerResult";
        case Err::DegenerateProblem: return "DegenerateProblem";
        case Err::DegenerateOrbitPresent: return "DegenerateOrbitPresent";
        case Err::NonContractibleLoop: return "NonContractibleLoop";
        case Err::ZeroEndpoint: return "ZeroEndpoint";
        case Err::HorizonTooSmall: return "HorizonTooSmall";
        case Err::RegularValueNotFound: return "RegularValueNotFound";
        case Err::Instability: return "Instability";
        case Err::DimensionMismatch: return "DimensionMismatch";
        case Err::Precondition: return "Precondition";
        case Err::SchemaError: return "SchemaError";
    }
    return "UnknownError";
}

}  // namespace findex
