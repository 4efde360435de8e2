#include "opspread/operator_mps.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace opspread {

namespace {

// (chi_l, 4, chi_r) -> (4*chi_l) x chi_r, row index = mu*chi_l + l
Eigen::MatrixXd matricize_left(const SiteTensor& t) {
  const Eigen::Index cl = t.left_dim(), cr = t.right_dim();
  Eigen::MatrixXd m(kPhysDim * cl, cr);
  for (int mu = 0; mu < kPhysDim; ++mu) m.middleRows(mu * cl, cl) = t[mu];
  return m;
}

// (chi_l, 4, chi_r) -> chi_l x (4*chi_r), col index = mu*chi_r + r
Eigen::MatrixXd matricize_right(const SiteTensor& t) {
  const Eigen::Index cl = t.left_dim(), cr = t.right_dim();
  Eigen::MatrixXd m(cl, kPhysDim * cr);
  for (int mu = 0; mu < kPhysDim; ++mu) m.middleCols(mu * cr, cr) = t[mu];
  return m;
}

SiteTensor from_left_matrix(const Eigen::MatrixXd& m, Eigen::Index chi_left) {
  SiteTensor t(chi_left, m.cols());
  for (int mu = 0; mu < kPhysDim; ++mu)
    t[mu] = m.middleRows(mu * chi_left, chi_left);
  return t;
}

SiteTensor from_right_matrix(const Eigen::MatrixXd& m, Eigen::Index chi_right) {
  SiteTensor t(m.rows(), chi_right);
  for (int mu = 0; mu < kPhysDim; ++mu)
    t[mu] = m.middleCols(mu * chi_right, chi_right);
  return t;
}

// thin QR with R diagonal forced non-negative (deterministic gauge)
void qr_positive(const Eigen::MatrixXd& m, Eigen::MatrixXd& q,
                 Eigen::MatrixXd& r) {
  const Eigen::Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), k);
  r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (r(i, i) < 0.0) {
      r.row(i) = -r.row(i);
      q.col(i) = -q.col(i);
    }
  }
}

struct ThinSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;  // descending
  Eigen::MatrixXd v;
};

// SVD with the sign convention: largest-magnitude entry of each left
// singular vector is positive. Eigen 3.4.0's BDCSVD can emit NaN on
// near-degenerate spectra (deflation bug); fall back to Jacobi when it does.
ThinSvd svd_fixed(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  if (out.u.hasNaN() || out.v.hasNaN() || out.s.hasNaN()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> jsvd(
        m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out = ThinSvd{jsvd.matrixU(), jsvd.singularValues(), jsvd.matrixV()};
  }
  for (Eigen::Index k = 0; k < out.u.cols(); ++k) {
    Eigen::Index imax = 0;
    out.u.col(k).cwiseAbs().maxCoeff(&imax);
    if (out.u(imax, k) < 0.0) {
      out.u.col(k) = -out.u.col(k);
      out.v.col(k) = -out.v.col(k);
    }
  }
  return out;
}

// number of singular values kept under the relative-weight cutoff and chi cap
Eigen::Index kept_rank(const Eigen::VectorXd& s, double cutoff, int chi_max) {
  const double total = s.squaredNorm();
  Eigen::Index k = s.size();
  if (total > 0.0 && cutoff > 0.0) {
    while (k > 1 && s(k - 1) * s(k - 1) / total < cutoff) --k;
  }
  if (chi_max > 0 && k > chi_max) k = chi_max;
  if (k < 1) k = 1;
  return k;
}

}  // namespace

OperatorMPS::OperatorMPS(std::vector<SiteTensor> sites)
    : sites_(std::move(sites)) {
  if (sites_.empty()) throw std::invalid_argument("OperatorMPS: empty chain");
  if (sites_.front().left_dim() != 1 || sites_.back().right_dim() != 1)
    throw std::invalid_argument("OperatorMPS: boundary bond dims must be 1");
  for (size_t j = 0; j + 1 < sites_.size(); ++j) {
    if (sites_[j].right_dim() != sites_[j + 1].left_dim())
      throw std::invalid_argument("OperatorMPS: bond dimension mismatch at " +
                                  std::to_string(j));
  }
}

OperatorMPS OperatorMPS::product_operator(const PauliString& q) {
  if (q.num_sites() < 1)
    throw std::invalid_argument("product_operator: need at least one site");
  std::vector<SiteTensor> sites;
  sites.reserve(static_cast<size_t>(q.num_sites()));
  for (PauliCode c : q.codes) {
    SiteTensor t(1, 1);
    t[static_cast<int>(c)](0, 0) = 1.0;
    sites.push_back(std::move(t));
  }
  OperatorMPS mps(std::move(sites));
  mps.form_ = CanonicalForm::Left;
  mps.center_ = mps.num_sites() - 1;
  return mps;
}

SiteTensor& OperatorMPS::mutable_site(int j) {
  require_valid_site(j, "mutable_site");
  form_ = CanonicalForm::None;
  center_ = -1;
  return sites_[static_cast<size_t>(j)];
}

Eigen::Index OperatorMPS::bond_dim(int bond) const {
  if (bond < 0 || bond > num_sites())
    throw std::out_of_range("bond_dim: bond out of range");
  if (bond == 0) return sites_.front().left_dim();
  return sites_[static_cast<size_t>(bond - 1)].right_dim();
}

Eigen::Index OperatorMPS::max_bond_dim() const {
  Eigen::Index m = 1;
  for (const auto& s : sites_) m = std::max(m, s.right_dim());
  return m;
}

double OperatorMPS::norm_squared() const {
  Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
  for (const auto& t : sites_) {
    Eigen::MatrixXd next =
        Eigen::MatrixXd::Zero(t.right_dim(), t.right_dim());
    for (int mu = 0; mu < kPhysDim; ++mu)
      next.noalias() += t[mu].transpose() * (env * t[mu]);
    env.swap(next);
  }
  return env(0, 0);
}

void OperatorMPS::normalize() {
  const double n = std::sqrt(norm_squared());
  if (n <= 0.0) throw std::runtime_error("normalize: zero-norm state");
  scale(1.0 / n);
  norm_log_ += std::log(n);
}

void OperatorMPS::scale(double factor) {
  const int j = (form_ == CanonicalForm::None) ? 0 : center_;
  for (int mu = 0; mu < kPhysDim; ++mu)
    sites_[static_cast<size_t>(j)][mu] *= factor;
}

void OperatorMPS::shift_center_right(int j) {
  Eigen::MatrixXd q, r;
  qr_positive(matricize_left(sites_[static_cast<size_t>(j)]), q, r);
  const Eigen::Index cl = sites_[static_cast<size_t>(j)].left_dim();
  sites_[static_cast<size_t>(j)] = from_left_matrix(q, cl);
  SiteTensor& next = sites_[static_cast<size_t>(j + 1)];
  for (int mu = 0; mu < kPhysDim; ++mu) next[mu] = r * next[mu];
}

void OperatorMPS::shift_center_left(int j) {
  // LQ via QR of the transpose
  const Eigen::MatrixXd m = matricize_right(sites_[static_cast<size_t>(j)]);
  Eigen::MatrixXd qt, rt;
  qr_positive(m.transpose(), qt, rt);
  const Eigen::Index cr = sites_[static_cast<size_t>(j)].right_dim();
  sites_[static_cast<size_t>(j)] = from_right_matrix(qt.transpose(), cr);
  SiteTensor& prev = sites_[static_cast<size_t>(j - 1)];
  for (int mu = 0; mu < kPhysDim; ++mu) prev[mu] = prev[mu] * rt.transpose();
}

void OperatorMPS::canonicalize(CanonicalForm target, int center) {
  const int L = num_sites();
  int ct = 0;
  switch (target) {
    case CanonicalForm::Left: ct = L - 1; break;
    case CanonicalForm::Right: ct = 0; break;
    case CanonicalForm::Mixed:
      if (center < 0 || center >= L)
        throw std::invalid_argument("canonicalize: bad center");
      ct = center;
      break;
    case CanonicalForm::None:
      form_ = CanonicalForm::None;
      center_ = -1;
      return;
  }
  if (form_ == CanonicalForm::None) {
    for (int j = 0; j + 1 < L; ++j) shift_center_right(j);
    center_ = L - 1;
    form_ = CanonicalForm::Mixed;
  }
  move_center(ct);
  form_ = target;
}

void OperatorMPS::move_center(int new_center) {
  if (form_ == CanonicalForm::None)
    throw std::logic_error("move_center: state has no canonical form");
  if (new_center < 0 || new_center >= num_sites())
    throw std::invalid_argument("move_center: target out of range");
  while (center_ < new_center) {
    shift_center_right(center_);
    ++center_;
  }
  while (center_ > new_center) {
    shift_center_left(center_);
    --center_;
  }
  form_ = CanonicalForm::Mixed;
}

std::vector<TruncationReport> OperatorMPS::truncate(double cutoff,
                                                    int chi_max) {
  const int L = num_sites();
  canonicalize(CanonicalForm::Mixed, L - 1);
  std::vector<TruncationReport> reports;
  reports.reserve(static_cast<size_t>(L - 1));
  for (int j = L - 1; j >= 1; --j) {
    SiteTensor& t = sites_[static_cast<size_t>(j)];
    const Eigen::Index cr = t.right_dim();
    const int chi_before = static_cast<int>(t.left_dim());
    ThinSvd svd = svd_fixed(matricize_right(t));
    const Eigen::Index k = kept_rank(svd.s, cutoff, chi_max);
    const double discarded =
        svd.s.tail(svd.s.size() - k).squaredNorm();
    sites_[static_cast<size_t>(j)] =
        from_right_matrix(svd.v.leftCols(k).transpose(), cr);
    const Eigen::MatrixXd carry =
        svd.u.leftCols(k) * svd.s.head(k).asDiagonal();
    SiteTensor& prev = sites_[static_cast<size_t>(j - 1)];
    for (int mu = 0; mu < kPhysDim; ++mu) prev[mu] = prev[mu] * carry;
    reports.push_back({j, discarded, chi_before, static_cast<int>(k)});
  }
  center_ = 0;
  form_ = CanonicalForm::Right;

  // with all sites but 0 right-isometric the norm is local to site 0
  double nsq = 0.0;
  for (int mu = 0; mu < kPhysDim; ++mu)
    nsq += sites_[0][mu].squaredNorm();
  const double n = std::sqrt(nsq);
  if (n <= 0.0) throw std::runtime_error("truncate: state collapsed to zero");
  for (int mu = 0; mu < kPhysDim; ++mu) sites_[0][mu] /= n;
  norm_log_ += std::log(n);

  std::reverse(reports.begin(), reports.end());
  return reports;
}

Eigen::VectorXd OperatorMPS::schmidt_values(int bond) const {
  if (bond < 1 || bond >= num_sites())
    throw std::out_of_range("schmidt_values: bond out of range");
  OperatorMPS work = *this;
  work.canonicalize(CanonicalForm::Mixed, bond - 1);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      matricize_left(work.sites_[static_cast<size_t>(bond - 1)]));
  return svd.singularValues();
}

std::vector<Eigen::VectorXd> OperatorMPS::schmidt_spectra() const {
  const int L = num_sites();
  OperatorMPS work = *this;
  work.canonicalize(CanonicalForm::Mixed, L - 1);
  std::vector<Eigen::VectorXd> spectra(static_cast<size_t>(L - 1));
  for (int j = L - 1; j >= 1; --j) {
    SiteTensor& t = work.sites_[static_cast<size_t>(j)];
    const Eigen::Index cr = t.right_dim();
    ThinSvd svd = svd_fixed(matricize_right(t));
    spectra[static_cast<size_t>(j - 1)] = svd.s;
    work.sites_[static_cast<size_t>(j)] =
        from_right_matrix(svd.v.transpose(), cr);
    const Eigen::MatrixXd carry = svd.u * svd.s.asDiagonal();
    SiteTensor& prev = work.sites_[static_cast<size_t>(j - 1)];
    for (int mu = 0; mu < kPhysDim; ++mu) prev[mu] = prev[mu] * carry;
  }
  return spectra;
}

TruncationReport OperatorMPS::apply_two_site_gate(const Eigen::MatrixXd& gate,
                                                  int left_site, double cutoff,
                                                  int chi_max,
                                                  bool move_right) {
  const int L = num_sites();
  if (left_site < 0 || left_site >= L - 1)
    throw std::out_of_range("apply_two_site_gate: site out of range");
  if (gate.rows() != 16 || gate.cols() != 16)
    throw std::invalid_argument("apply_two_site_gate: gate must be 16x16");
  const double ortho_dev =
      (gate.transpose() * gate - Eigen::MatrixXd::Identity(16, 16))
          .cwiseAbs()
          .maxCoeff();
  if (ortho_dev > 1e-10)
    throw std::invalid_argument(
        "apply_two_site_gate: gate not orthogonal, deviation " +
        std::to_string(ortho_dev));

  if (form_ == CanonicalForm::None)
    canonicalize(CanonicalForm::Mixed, left_site);
  else if (center_ < left_site)
    move_center(left_site);
  else if (center_ > left_site + 1)
    move_center(left_site + 1);

  const SiteTensor& a = sites_[static_cast<size_t>(left_site)];
  const SiteTensor& b = sites_[static_cast<size_t>(left_site + 1)];
  const Eigen::Index cl = a.left_dim(), cr = b.right_dim();
  const int chi_before = static_cast<int>(a.right_dim());

  // two-site block, columns indexed by (mu1*4 + mu2)
  Eigen::MatrixXd theta(cl * cr, 16);
  for (int mu1 = 0; mu1 < kPhysDim; ++mu1)
    for (int mu2 = 0; mu2 < kPhysDim; ++mu2) {
      const Eigen::MatrixXd prod = a[mu1] * b[mu2];
      theta.col(mu1 * 4 + mu2) =
          Eigen::Map<const Eigen::VectorXd>(prod.data(), cl * cr);
    }
  const Eigen::MatrixXd rotated = theta * gate.transpose();

  Eigen::MatrixXd block(kPhysDim * cl, kPhysDim * cr);
  for (int nu1 = 0; nu1 < kPhysDim; ++nu1)
    for (int nu2 = 0; nu2 < kPhysDim; ++nu2)
      block.block(nu1 * cl, nu2 * cr, cl, cr) =
          Eigen::Map<const Eigen::MatrixXd>(rotated.col(nu1 * 4 + nu2).data(),
                                            cl, cr);

  const double nsq = block.squaredNorm();
  ThinSvd svd = svd_fixed(block);
  const Eigen::Index k = kept_rank(svd.s, cutoff, chi_max);
  const double discarded = svd.s.tail(svd.s.size() - k).squaredNorm();

  Eigen::VectorXd s = svd.s.head(k);
  if (discarded > 0.0 && nsq > discarded) {
    const double rescale = std::sqrt(nsq / (nsq - discarded));
    s *= rescale;
    norm_log_ -= std::log(rescale);
  }

  if (move_right) {
    sites_[static_cast<size_t>(left_site)] =
        from_left_matrix(svd.u.leftCols(k), cl);
    sites_[static_cast<size_t>(left_site + 1)] = from_right_matrix(
        (s.asDiagonal() * svd.v.leftCols(k).transpose()).eval(), cr);
    center_ = left_site + 1;
  } else {
    sites_[static_cast<size_t>(left_site)] =
        from_left_matrix((svd.u.leftCols(k) * s.asDiagonal()).eval(), cl);
    sites_[static_cast<size_t>(left_site + 1)] =
        from_right_matrix(svd.v.leftCols(k).transpose(), cr);
    center_ = left_site;
  }
  form_ = CanonicalForm::Mixed;
  return {left_site + 1, discarded, chi_before, static_cast<int>(k)};
}

ChoiVector OperatorMPS::to_choi() const {
  const int L = num_sites();
  if (L > kChoiEnumMaxSites)
    throw std::invalid_argument("to_choi: L exceeds enumeration cap");
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Ones(1, 1);
  for (int j = 0; j < L; ++j) {
    const SiteTensor& t = sites_[static_cast<size_t>(j)];
    Eigen::MatrixXd next(prefix.rows() * kPhysDim, t.right_dim());
    for (int mu = 0; mu < kPhysDim; ++mu) {
      const Eigen::MatrixXd part = prefix * t[mu];
      next(Eigen::seqN(mu, prefix.rows(), kPhysDim), Eigen::all) = part;
    }
    prefix.swap(next);
  }
  ChoiVector v;
  v.num_sites = L;
  v.amplitudes = prefix.col(0);
  return v;
}

double OperatorMPS::left_isometry_residual(int j) const {
  require_valid_site(j, "left_isometry_residual");
  const SiteTensor& t = sites_[static_cast<size_t>(j)];
  Eigen::MatrixXd acc =
      Eigen::MatrixXd::Zero(t.right_dim(), t.right_dim());
  for (int mu = 0; mu < kPhysDim; ++mu)
    acc.noalias() += t[mu].transpose() * t[mu];
  acc -= Eigen::MatrixXd::Identity(t.right_dim(), t.right_dim());
  return acc.cwiseAbs().maxCoeff();
}

double OperatorMPS::right_isometry_residual(int j) const {
  require_valid_site(j, "right_isometry_residual");
  const SiteTensor& t = sites_[static_cast<size_t>(j)];
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(t.left_dim(), t.left_dim());
  for (int mu = 0; mu < kPhysDim; ++mu)
    acc.noalias() += t[mu] * t[mu].transpose();
  acc -= Eigen::MatrixXd::Identity(t.left_dim(), t.left_dim());
  return acc.cwiseAbs().maxCoeff();
}

void OperatorMPS::restore_tag(CanonicalForm form, int center,
                              double norm_log) {
  if (form != CanonicalForm::None && (center < 0 || center >= num_sites()))
    throw std::invalid_argument("restore_tag: center out of range");
  form_ = form;
  center_ = (form == CanonicalForm::None) ? -1 : center;
  norm_log_ = norm_log;
}

void OperatorMPS::require_valid_site(int j, const char* where) const {
  if (j < 0 || j >= num_sites())
    throw std::out_of_range(std::string(where) + ": site out of range");
}

}  // namespace opspread
