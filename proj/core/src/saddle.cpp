#include "nsv/saddle.hpp"

#include "nsv/error.hpp"

namespace nsv {

SparseOperator eliminate_dirichlet(const MixedSpace& space, const SparseOperator& a) {
  SparseOperator out = a;
  const auto& mask = space.dirichlet_mask();
  for (Eigen::Index col = 0; col < out.outerSize(); ++col)
    for (SparseOperator::InnerIterator it(out, col); it; ++it)
      if (mask[it.row()] || mask[it.col()]) it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
  return out;
}

SaddlePointSolver::SaddlePointSolver(const MixedSpace& space, const SparseOperator& velocity_block,
                                     const SparseOperator& div)
    : space_(&space), lu_(std::make_unique<Eigen::UmfPackLU<SparseOperator>>()) {
  const auto nv = static_cast<Eigen::Index>(space.n_vel());
  const auto np = static_cast<Eigen::Index>(space.n_pre());
  if (velocity_block.rows() != nv || velocity_block.cols() != nv) throw ValidationError("velocity block has wrong size");
  if (div.rows() != np || div.cols() != nv) throw ValidationError("divergence block has wrong size");

  const auto& mask = space.dirichlet_mask();
  const SparseOperator a = eliminate_dirichlet(space, velocity_block);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nonZeros() + 2 * div.nonZeros() + 1);
  for (Eigen::Index col = 0; col < a.outerSize(); ++col)
    for (SparseOperator::InnerIterator it(a, col); it; ++it)
      if (it.value() != 0.0 || it.row() == it.col()) t.emplace_back(it.row(), it.col(), it.value());
  // Pressure dof 0 is pinned: its row and column become the identity.
  for (Eigen::Index col = 0; col < div.outerSize(); ++col)
    for (SparseOperator::InnerIterator it(div, col); it; ++it) {
      if (mask[it.col()] || it.row() == 0 || it.value() == 0.0) continue;
      t.emplace_back(nv + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nv + it.row(), it.value());
    }
  t.emplace_back(nv, nv, 1.0);
  system_.resize(nv + np, nv + np);
  system_.setFromTriplets(t.begin(), t.end());
  system_.makeCompressed();

  // The saddle system is structurally symmetric.
  lu_->umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
  lu_->umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_AMD;
  lu_->compute(system_);
  if (lu_->info() != Eigen::Success) throw SolverError("saddle-point factorization failed (singular system)");
}

SaddlePointSolver::Solution SaddlePointSolver::solve(const Eigen::VectorXd& rhs_velocity) const {
  const auto nv = static_cast<Eigen::Index>(space_->n_vel());
  const auto np = static_cast<Eigen::Index>(space_->n_pre());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv + np);
  rhs.head(nv) = rhs_velocity;
  zero_dirichlet(*space_, rhs);
  Eigen::VectorXd x = lu_->solve(rhs);
  if (lu_->info() != Eigen::Success || !x.allFinite()) throw SolverError("saddle-point solve failed");
  Solution s;
  s.velocity = x.head(nv);
  zero_dirichlet(*space_, s.velocity);
  const auto& m = space_->pressure_mean_weights();
  s.pressure = x.segment(nv, np);
  s.pressure.array() -= m.dot(s.pressure) / m.sum();
  return s;
}

}  // namespace nsv
