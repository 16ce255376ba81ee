#include "cranerl/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cranerl/config.hpp"
#include "cranerl/csv.hpp"

namespace cranerl {

namespace {

constexpr char kMagic[8] = {'C', 'R', 'N', 'R', 'L', 'C', 'K', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte()) << (8 * i);
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string bytes(std::size_t n) {
    if (pos_ + n > data_.size()) throw std::runtime_error("truncated checkpoint");
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool exhausted() const { return pos_ == data_.size(); }

 private:
  std::uint8_t byte() {
    if (pos_ >= data_.size()) throw std::runtime_error("truncated checkpoint");
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::string data_;
  std::size_t pos_ = 0;
};

void put_tensors(std::string& out, PolicyParameters& params, const std::string& prefix) {
  auto refs = tensor_refs(params);
  put_u32(out, static_cast<std::uint32_t>(refs.size()));
  for (const auto& r : refs) {
    const std::string name = prefix + r.name;
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u64(out, static_cast<std::uint64_t>(r.rows));
    put_u64(out, static_cast<std::uint64_t>(r.cols));
    for (Eigen::Index i = 0; i < r.size; ++i) put_f64(out, r.data[i]);
  }
}

void read_tensors(Reader& in, PolicyParameters& params, const std::string& prefix) {
  auto refs = tensor_refs(params);
  const std::uint32_t count = in.u32();
  if (count != refs.size()) throw std::runtime_error("checkpoint tensor count mismatch");
  for (auto& r : refs) {
    const std::uint32_t name_len = in.u32();
    const std::string name = in.bytes(name_len);
    if (name != prefix + r.name) throw std::runtime_error("checkpoint tensor order mismatch: " + name);
    const std::uint64_t rows = in.u64();
    const std::uint64_t cols = in.u64();
    if (rows != static_cast<std::uint64_t>(r.rows) || cols != static_cast<std::uint64_t>(r.cols))
      throw std::runtime_error("checkpoint tensor shape mismatch: " + name);
    for (Eigen::Index i = 0; i < r.size; ++i) r.data[i] = in.f64();
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const TrainerSnapshot& snapshot) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, kCheckpointVersion);

  put_u64(out, snapshot.config_json.size());
  out += snapshot.config_json;

  put_u64(out, snapshot.global_sim_steps);
  put_u64(out, snapshot.episodes);
  put_u32(out, static_cast<std::uint32_t>(snapshot.lesson_index));
  put_u32(out, static_cast<std::uint32_t>(snapshot.window_outcomes.size()));
  for (std::uint8_t o : snapshot.window_outcomes) out.push_back(static_cast<char>(o));

  put_u64(out, static_cast<std::uint64_t>(snapshot.stats.dim()));
  put_f64(out, snapshot.stats.count());
  const VecX mean = snapshot.stats.mean();
  const VecX m2 = snapshot.stats.raw_m2();
  for (Eigen::Index i = 0; i < mean.size(); ++i) put_f64(out, mean[i]);
  for (Eigen::Index i = 0; i < m2.size(); ++i) put_f64(out, m2[i]);

  put_u32(out, static_cast<std::uint32_t>(snapshot.rng_streams.size()));
  for (const auto& s : snapshot.rng_streams)
    for (std::uint64_t w : s) put_u64(out, w);

  put_u64(out, snapshot.adam_step);

  PolicyParameters params = snapshot.params;
  PolicyParameters adam_m = snapshot.adam_m;
  PolicyParameters adam_v = snapshot.adam_v;
  put_tensors(out, params, "p:");
  put_tensors(out, adam_m, "m:");
  put_tensors(out, adam_v, "v:");

  write_file_atomic(path, out);
}

TrainerSnapshot load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(data));

  if (r.bytes(8) != std::string(kMagic, sizeof(kMagic)))
    throw std::runtime_error("not a checkpoint file: " + path.string());
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));

  TrainerSnapshot snap;
  const std::uint64_t cfg_len = r.u64();
  snap.config_json = r.bytes(cfg_len);

  snap.global_sim_steps = r.u64();
  snap.episodes = r.u64();
  snap.lesson_index = static_cast<int>(r.u32());
  const std::uint32_t outcomes = r.u32();
  snap.window_outcomes.resize(outcomes);
  const std::string raw = r.bytes(outcomes);
  for (std::uint32_t i = 0; i < outcomes; ++i) snap.window_outcomes[i] = static_cast<std::uint8_t>(raw[i]);

  const std::uint64_t dim = r.u64();
  const double count = r.f64();
  VecX mean(dim), m2(dim);
  for (std::uint64_t i = 0; i < dim; ++i) mean[i] = r.f64();
  for (std::uint64_t i = 0; i < dim; ++i) m2[i] = r.f64();
  snap.stats = RunningStats(static_cast<int>(dim));
  snap.stats.restore(count, mean, m2);

  const std::uint32_t streams = r.u32();
  snap.rng_streams.resize(streams);
  for (auto& s : snap.rng_streams)
    for (auto& w : s) w = r.u64();

  snap.adam_step = r.u64();

  // Shapes come from the embedded configuration.
  const RunConfig cfg = config_from_json(nlohmann::json::parse(snap.config_json));
  Rng dummy(0);
  snap.params = init_policy(MlpShape{}, cfg.ppo.init_log_std, dummy);
  snap.adam_m = zeros_like(snap.params);
  snap.adam_v = zeros_like(snap.params);
  read_tensors(r, snap.params, "p:");
  read_tensors(r, snap.adam_m, "m:");
  read_tensors(r, snap.adam_v, "v:");
  if (!r.exhausted()) throw std::runtime_error("trailing bytes in checkpoint " + path.string());
  return snap;
}

}  // namespace cranerl
