// Artifact serialization: CSV with shortest round-trip decimals, plain-text
// PGM images, a binary lead field cache, and content hashing.
#pragma once

#include "memrx/leadfield.hpp"
#include "memrx/phantom.hpp"
#include "memrx/solvers.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace memrx {

std::string format_double(double x);  // shortest decimal that round-trips

void write_csv_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
void write_csv_vector(const std::filesystem::path& path, const Eigen::VectorXd& v);
Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);

// P2 PGM, 8-bit, value = round(255 * n / n_max).
void write_pgm(const std::filesystem::path& path, const ConcentrationImage& img);

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<IterationRecord>& trace);

// Binary lead field cache (exact doubles).
void write_lead_field_cache(const std::filesystem::path& path, const LeadField& lf);
LeadField read_lead_field_cache(const std::filesystem::path& path);

// FNV-1a 64-bit over raw bytes.
std::uint64_t fnv1a_hash(const void* data, std::size_t size);
std::uint64_t hash_file(const std::filesystem::path& path);
std::uint64_t hash_string(const std::string& s);

}  // namespace memrx
