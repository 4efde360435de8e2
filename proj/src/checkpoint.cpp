#include "opspread/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace opspread {

namespace {

constexpr char kMagic[8] = {'O', 'P', 'S', 'M', 'P', 'S', '1', '\n'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return value;
}

}  // namespace

void save_mps(const std::string& path, const OperatorMPS& mps) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  write_pod(os, kVersion);
  const std::uint64_t L = static_cast<std::uint64_t>(mps.num_sites());
  write_pod(os, L);
  for (int b = 0; b <= mps.num_sites(); ++b)
    write_pod(os, static_cast<std::uint64_t>(mps.bond_dim(b)));
  write_pod(os, mps.norm_log());
  write_pod(os, static_cast<std::int32_t>(mps.form()));
  write_pod(os, static_cast<std::int32_t>(mps.center()));
  for (int j = 0; j < mps.num_sites(); ++j) {
    const SiteTensor& t = mps.site(j);
    for (int mu = 0; mu < kPhysDim; ++mu) {
      const Eigen::MatrixXd& m = t[mu];
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) write_pod(os, m(r, c));
    }
  }
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

OperatorMPS load_mps(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  const auto version = read_pod<std::uint32_t>(is);
  if (version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version " +
                             std::to_string(version));
  const auto L = static_cast<int>(read_pod<std::uint64_t>(is));
  if (L < 1 || L > 4096) throw std::runtime_error("checkpoint: bad L");
  std::vector<Eigen::Index> chi(static_cast<size_t>(L) + 1);
  for (auto& c : chi) c = static_cast<Eigen::Index>(read_pod<std::uint64_t>(is));
  const double norm_log = read_pod<double>(is);
  const auto form = static_cast<CanonicalForm>(read_pod<std::int32_t>(is));
  const auto center = read_pod<std::int32_t>(is);

  std::vector<SiteTensor> sites;
  sites.reserve(static_cast<size_t>(L));
  for (int j = 0; j < L; ++j) {
    SiteTensor t(chi[static_cast<size_t>(j)], chi[static_cast<size_t>(j) + 1]);
    for (int mu = 0; mu < kPhysDim; ++mu) {
      Eigen::MatrixXd& m = t[mu];
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          m(r, c) = read_pod<double>(is);
    }
    sites.push_back(std::move(t));
  }
  OperatorMPS mps(std::move(sites));
  // restore gauge metadata through the public surface
  if (form != CanonicalForm::None) {
    // tensors already carry the gauge; only the tag needs reinstating
    mps.restore_tag(form, center, norm_log);
  } else {
    mps.restore_tag(CanonicalForm::None, -1, norm_log);
  }
  return mps;
}

}  // namespace opspread
