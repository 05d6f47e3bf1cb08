#include "rrl/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace rrl {

namespace {

constexpr std::uint32_t kMagic = 0x4d4d524cu;  // "MMRL"
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return value;
}

void write_string(std::ostream& out, const std::string& s) {
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const auto len = read_pod<std::uint32_t>(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw std::runtime_error("checkpoint: truncated string");
  return s;
}

void write_doubles(std::ostream& out, const std::vector<double>& v) {
  write_pod<std::uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_doubles(std::istream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint: truncated array");
  return v;
}

void write_mlp(std::ostream& out, const MlpParams& p) {
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(p.layer_sizes.size()));
  for (int s : p.layer_sizes) write_pod<std::int32_t>(out, s);
  write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(p.hidden_activation));
  write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(p.output_activation));
  write_pod<double>(out, p.output_bound);
  for (const auto& w : p.weights) write_doubles(out, w.data);
  for (const auto& b : p.biases) write_doubles(out, b);
}

void read_mlp(std::istream& in, MlpParams& p) {
  const auto layers = read_pod<std::uint32_t>(in);
  std::vector<int> sizes(layers);
  for (auto& s : sizes) s = read_pod<std::int32_t>(in);
  if (sizes != p.layer_sizes)
    throw std::runtime_error("checkpoint: network layer sizes do not match agent");
  p.hidden_activation = static_cast<HiddenActivation>(read_pod<std::uint8_t>(in));
  p.output_activation = static_cast<OutputActivation>(read_pod<std::uint8_t>(in));
  p.output_bound = read_pod<double>(in);
  for (auto& w : p.weights) {
    auto data = read_doubles(in);
    if (data.size() != w.data.size())
      throw std::runtime_error("checkpoint: weight size mismatch");
    w.data = std::move(data);
  }
  for (auto& b : p.biases) {
    auto data = read_doubles(in);
    if (data.size() != b.size())
      throw std::runtime_error("checkpoint: bias size mismatch");
    b = std::move(data);
  }
  check_mlp_shapes(p);
}

void write_adam(std::ostream& out, const AdamState& s) {
  write_pod<std::uint64_t>(out, s.step_count);
  write_pod<double>(out, s.beta1);
  write_pod<double>(out, s.beta2);
  write_pod<double>(out, s.epsilon);
  write_pod<double>(out, s.learning_rate);
  for (const auto& m : s.m_weights) write_doubles(out, m.data);
  for (const auto& v : s.v_weights) write_doubles(out, v.data);
  for (const auto& m : s.m_biases) write_doubles(out, m);
  for (const auto& v : s.v_biases) write_doubles(out, v);
}

void read_adam(std::istream& in, AdamState& s) {
  s.step_count = read_pod<std::uint64_t>(in);
  s.beta1 = read_pod<double>(in);
  s.beta2 = read_pod<double>(in);
  s.epsilon = read_pod<double>(in);
  s.learning_rate = read_pod<double>(in);
  auto read_into = [&](std::vector<double>& dst) {
    auto data = read_doubles(in);
    if (data.size() != dst.size())
      throw std::runtime_error("checkpoint: optimizer state size mismatch");
    dst = std::move(data);
  };
  for (auto& m : s.m_weights) read_into(m.data);
  for (auto& v : s.v_weights) read_into(v.data);
  for (auto& m : s.m_biases) read_into(m);
  for (auto& v : s.v_biases) read_into(v);
}

}  // namespace

void save_checkpoint(const std::string& path, Agent& agent, std::uint64_t config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
  write_pod(out, kMagic);
  write_pod(out, kVersion);
  write_string(out, agent.algorithm());
  write_pod<std::uint64_t>(out, config_hash);
  const auto nets = agent.networks();
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(nets.size()));
  for (const auto& net : nets) {
    write_string(out, net.name);
    write_mlp(out, *net.online);
    write_mlp(out, *net.target);
    write_adam(out, *net.opt);
  }
  if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

std::uint64_t load_checkpoint(const std::string& path, Agent& agent) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open: " + path);
  if (read_pod<std::uint32_t>(in) != kMagic)
    throw std::runtime_error("checkpoint: bad magic");
  if (read_pod<std::uint32_t>(in) != kVersion)
    throw std::runtime_error("checkpoint: unsupported version");
  const std::string algo = read_string(in);
  if (algo != agent.algorithm())
    throw std::runtime_error("checkpoint: algorithm mismatch: file has " + algo);
  const auto hash = read_pod<std::uint64_t>(in);
  const auto nets = agent.networks();
  const auto count = read_pod<std::uint32_t>(in);
  if (count != nets.size()) throw std::runtime_error("checkpoint: network count mismatch");
  for (const auto& net : nets) {
    const std::string name = read_string(in);
    if (name != net.name)
      throw std::runtime_error("checkpoint: unexpected network: " + name);
    read_mlp(in, *net.online);
    read_mlp(in, *net.target);
    read_adam(in, *net.opt);
  }
  return hash;
}

std::string peek_checkpoint_algorithm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open: " + path);
  if (read_pod<std::uint32_t>(in) != kMagic)
    throw std::runtime_error("checkpoint: bad magic");
  if (read_pod<std::uint32_t>(in) != kVersion)
    throw std::runtime_error("checkpoint: unsupported version");
  return read_string(in);
}

}  // namespace rrl
