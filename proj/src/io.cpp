#include "gsiht/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gsiht {

namespace {

std::string strip_comment(const std::string& line) {
  auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void write_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw std::runtime_error("design file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
  return v;
}

void write_f64_le(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  write_u64_le(out, bits);
}

double read_f64_le(std::istream& in) {
  std::uint64_t bits = read_u64_le(in);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

std::vector<double> load_doubles(const std::string& path) {
  auto in = open_in(path);
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream row(strip_comment(line));
    std::string token;
    while (row >> token) {
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size())
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected a number, got '" + token + "'");
      values.push_back(v);
    }
  }
  return values;
}

}  // namespace

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void save_vector(const std::string& path, const Eigen::VectorXd& v) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out << format_full(v[i]) << '\n';
}

Eigen::VectorXd load_vector(const std::string& path) {
  auto values = load_doubles(path);
  Eigen::VectorXd v(values.size());
  for (size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  return v;
}

void save_support(const std::string& path, const Support& support) {
  auto out = open_out(path);
  for (int v : support) out << v << '\n';
}

Support load_support(const std::string& path) {
  auto values = load_doubles(path);
  Support s;
  s.reserve(values.size());
  for (double v : values) {
    int node = static_cast<int>(v);
    if (double(node) != v)
      throw std::runtime_error(path + ": support entries must be integers");
    s.push_back(node);
  }
  return make_support(std::move(s));
}

void save_design(const std::string& path, const Eigen::MatrixXd& a) {
  auto out = open_out(path, true);
  write_u64_le(out, std::uint64_t(a.rows()));
  write_u64_le(out, std::uint64_t(a.cols()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) write_f64_le(out, a(i, j));
  if (!out) throw std::runtime_error("write failed for " + path);
}

Eigen::MatrixXd load_design(const std::string& path) {
  auto in = open_in(path, true);
  const std::uint64_t m = read_u64_le(in);
  const std::uint64_t p = read_u64_le(in);
  if (m < 1 || p < 1 || m > (1u << 26) || p > (1u << 26))
    throw std::runtime_error(path + ": implausible design dimensions");
  Eigen::MatrixXd a(m, p);
  for (std::uint64_t i = 0; i < m; ++i)
    for (std::uint64_t j = 0; j < p; ++j) a(i, j) = read_f64_le(in);
  return a;
}

void save_instance_dir(const std::string& dir, const SynthInstance& si,
                       double noise_norm, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  save_design(dir + "/design.bin", si.inst.A);
  save_vector(dir + "/y.txt", si.inst.y);
  save_vector(dir + "/x_true.txt", si.x_true);
  save_support(dir + "/support.txt", si.support);
  nlohmann::ordered_json manifest;
  manifest["m"] = si.inst.A.rows();
  manifest["p"] = si.inst.A.cols();
  manifest["s"] = si.support.size();
  manifest["noise_norm"] = noise_norm;
  manifest["seed"] = seed;
  auto out = open_out(dir + "/manifest.json");
  out << manifest.dump(2) << '\n';
}

SynthInstance load_instance_dir(const std::string& dir) {
  SynthInstance si;
  si.inst.A = load_design(dir + "/design.bin");
  si.inst.y = load_vector(dir + "/y.txt");
  si.inst.classification = false;
  if (si.inst.y.size() != si.inst.A.rows())
    throw std::runtime_error(dir + ": y length does not match design rows");
  if (std::filesystem::exists(dir + "/x_true.txt")) {
    si.x_true = load_vector(dir + "/x_true.txt");
    if (si.x_true.size() != si.inst.A.cols())
      throw std::runtime_error(dir + ": x_true length does not match p");
  }
  if (std::filesystem::exists(dir + "/support.txt")) {
    si.support = load_support(dir + "/support.txt");
    for (int v : si.support)
      if (v < 0 || v >= si.inst.A.cols())
        throw std::runtime_error(dir + ": support node out of range");
  }
  return si;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  auto in = open_in(path);
  std::map<std::string, std::string> config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": empty key");
    config[key] = value;
  }
  return config;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace gsiht
