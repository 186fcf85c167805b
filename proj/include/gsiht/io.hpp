#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "gsiht/synth.hpp"

namespace gsiht {

// Report cells use 12 significant digits; raw vectors round-trip at full
// precision (17 digits).
std::string format_sig(double v);
std::string format_full(double v);

void save_vector(const std::string& path, const Eigen::VectorXd& v);
Eigen::VectorXd load_vector(const std::string& path);

void save_support(const std::string& path, const Support& support);
Support load_support(const std::string& path);

// Binary design matrix: two little-endian u64 (rows, cols), then row-major
// little-endian f64 entries.
void save_design(const std::string& path, const Eigen::MatrixXd& a);
Eigen::MatrixXd load_design(const std::string& path);

// Instance directory: design.bin, y.txt, x_true.txt, support.txt and a
// manifest.json describing the shapes. Truth files are optional on load.
void save_instance_dir(const std::string& dir, const SynthInstance& si,
                       double noise_norm, std::uint64_t seed);
SynthInstance load_instance_dir(const std::string& dir);

// key = value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_config_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace gsiht
