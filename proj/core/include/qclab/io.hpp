#pragma once

// CSV formats for the three data types:
//   exponential sums   header `omega,re,im`
//   zero sets          header `point,multiplicity`
//   point measures     header `gamma,re,im`, the gamma = 0 row carrying d

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qclab/diffraction.hpp"
#include "qclab/wiener.hpp"
#include "qclab/zeros.hpp"

namespace qclab {

enum class InputKind { exp_sum, zero_set, point_measure };

const char* to_string(InputKind kind) noexcept;

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

// Kind from the header line; parse error for an unknown header.
InputKind detect_kind(std::istream& in);
InputKind detect_kind(const std::filesystem::path& path);

// Readers consume the header line too. Duplicate frequencies or points are
// summed and reported in `warnings`.
ExpSum read_exp_sum(std::istream& in, std::vector<std::string>* warnings = nullptr,
                    const AlgebraOptions& opts = {});
// Without a window the hull of the points padded by 1/2 is used.
ZeroSet read_zero_set(std::istream& in, std::optional<Window> window = {},
                      std::vector<std::string>* warnings = nullptr);
PointMeasure read_point_measure(std::istream& in, std::vector<std::string>* warnings = nullptr);

ExpSum load_exp_sum(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr,
                    const AlgebraOptions& opts = {});
ZeroSet load_zero_set(const std::filesystem::path& path, std::optional<Window> window = {},
                      std::vector<std::string>* warnings = nullptr);
PointMeasure load_point_measure(const std::filesystem::path& path,
                                std::vector<std::string>* warnings = nullptr);

void write_exp_sum(std::ostream& out, const ExpSum& f);
void write_zero_set(std::ostream& out, const ZeroSet& a);
void write_point_measure(std::ostream& out, const PointMeasure& mu);

}  // namespace qclab
