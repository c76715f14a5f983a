#include "qclab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qclab/error.hpp"

namespace qclab {

namespace {

constexpr const char* kExpSumHeader = "omega,re,im";
constexpr const char* kZeroSetHeader = "point,multiplicity";
constexpr const char* kMeasureHeader = "gamma,re,im";

[[noreturn]] void fail(ErrorKind kind, long line, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line << ": " << msg;
  throw Error(kind, os.str());
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& field, long line, const char* name) {
  const std::string t = trim(field);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last) {
    fail(ErrorKind::parse, line, std::string("cannot read ") + name + " from '" + field + "'");
  }
  if (!std::isfinite(v)) {
    fail(ErrorKind::invalid_input, line, std::string(name) + " is not finite");
  }
  return v;
}

long parse_count(const std::string& field, long line) {
  const std::string t = trim(field);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    fail(ErrorKind::parse, line, "cannot read multiplicity from '" + field + "'");
  }
  if (v < 1 || v > 1000000) fail(ErrorKind::invalid_input, line, "multiplicity must be a positive integer");
  return v;
}

// Rows of a CSV body with `columns` fields each, with their line numbers.
struct Row {
  long line;
  std::vector<std::string> fields;
};

std::vector<Row> read_body(std::istream& in, const char* header, std::size_t columns) {
  std::string line;
  if (!next_line(in, line)) fail(ErrorKind::parse, 1, std::string("empty input, expected header '") + header + "'");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }
  if (line != header) fail(ErrorKind::parse, 1, "expected header '" + std::string(header) + "', found '" + line + "'");
  std::vector<Row> rows;
  long n = 1;
  while (next_line(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (fields.size() != columns) {
      std::ostringstream os;
      os << "expected " << columns << " fields, found " << fields.size();
      fail(ErrorKind::parse, n, os.str());
    }
    rows.push_back({n, std::move(fields)});
  }
  return rows;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  return in;
}

void warn(std::vector<std::string>* warnings, const std::string& msg) {
  if (warnings) warnings->push_back(msg);
}

}  // namespace

const char* to_string(InputKind kind) noexcept {
  switch (kind) {
    case InputKind::exp_sum:
      return "exp_sum";
    case InputKind::zero_set:
      return "zero_set";
    case InputKind::point_measure:
      return "point_measure";
  }
  return "unknown";
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorKind::io, "cannot format number");
  return std::string(buf, ptr);
}

InputKind detect_kind(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) fail(ErrorKind::parse, 1, "empty input");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
  if (line == kExpSumHeader) return InputKind::exp_sum;
  if (line == kZeroSetHeader) return InputKind::zero_set;
  if (line == kMeasureHeader) return InputKind::point_measure;
  fail(ErrorKind::parse, 1, "unknown header '" + line + "'");
}

InputKind detect_kind(const std::filesystem::path& path) {
  auto in = open(path);
  return detect_kind(in);
}

ExpSum read_exp_sum(std::istream& in, std::vector<std::string>* warnings, const AlgebraOptions& opts) {
  std::vector<Term> terms;
  std::map<double, long> seen;
  for (const auto& row : read_body(in, kExpSumHeader, 3)) {
    const double omega = parse_real(row.fields[0], row.line, "omega");
    const complex q(parse_real(row.fields[1], row.line, "re"), parse_real(row.fields[2], row.line, "im"));
    if (auto [it, inserted] = seen.emplace(omega, row.line); !inserted) {
      warn(warnings, "line " + std::to_string(row.line) + ": duplicate omega " + format_double(omega) +
                         " (first on line " + std::to_string(it->second) + "), coefficients summed");
    }
    terms.push_back({omega, q});
  }
  return canonicalize(std::move(terms), opts);
}

ZeroSet read_zero_set(std::istream& in, std::optional<Window> window, std::vector<std::string>* warnings) {
  std::map<double, std::pair<long, long>> points;  // point -> (multiplicity, first line)
  for (const auto& row : read_body(in, kZeroSetHeader, 2)) {
    const double p = parse_real(row.fields[0], row.line, "point");
    const long m = parse_count(row.fields[1], row.line);
    auto [it, inserted] = points.emplace(p, std::make_pair(m, row.line));
    if (!inserted) {
      it->second.first += m;
      warn(warnings, "line " + std::to_string(row.line) + ": duplicate point " + format_double(p) +
                         " (first on line " + std::to_string(it->second.second) + "), multiplicities summed");
    }
  }
  std::vector<Zero> zeros;
  zeros.reserve(points.size());
  for (const auto& [p, v] : points) zeros.push_back({p, static_cast<int>(v.first)});
  Window w{};
  if (window) {
    w = *window;
  } else if (!zeros.empty()) {
    w = {zeros.front().point - 0.5, zeros.back().point + 0.5};
  }
  return ZeroSet(w, std::move(zeros));
}

PointMeasure read_point_measure(std::istream& in, std::vector<std::string>* warnings) {
  std::map<double, std::pair<complex, long>> atoms;
  for (const auto& row : read_body(in, kMeasureHeader, 3)) {
    const double g = parse_real(row.fields[0], row.line, "gamma");
    const complex b(parse_real(row.fields[1], row.line, "re"), parse_real(row.fields[2], row.line, "im"));
    auto [it, inserted] = atoms.emplace(g == 0.0 ? 0.0 : g, std::make_pair(b, row.line));
    if (!inserted) {
      it->second.first += b;
      warn(warnings, "line " + std::to_string(row.line) + ": duplicate gamma " + format_double(g) +
                         " (first on line " + std::to_string(it->second.second) + "), masses summed");
    }
  }
  double d = 0.0;
  std::vector<Atom> list;
  for (const auto& [g, v] : atoms) {
    if (g == 0.0) {
      if (std::abs(v.first.imag()) > 1e-12 * std::max(1.0, std::abs(v.first.real())) || v.first.real() < 0.0) {
        fail(ErrorKind::invalid_input, v.second, "the gamma = 0 row must carry a real d >= 0");
      }
      d = v.first.real();
    } else {
      list.push_back({g, v.first});
    }
  }
  return PointMeasure(d, std::move(list));
}

ExpSum load_exp_sum(const std::filesystem::path& path, std::vector<std::string>* warnings,
                    const AlgebraOptions& opts) {
  auto in = open(path);
  return read_exp_sum(in, warnings, opts);
}

ZeroSet load_zero_set(const std::filesystem::path& path, std::optional<Window> window,
                      std::vector<std::string>* warnings) {
  auto in = open(path);
  return read_zero_set(in, window, warnings);
}

PointMeasure load_point_measure(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  auto in = open(path);
  return read_point_measure(in, warnings);
}

void write_exp_sum(std::ostream& out, const ExpSum& f) {
  out << kExpSumHeader << '\n';
  for (const auto& t : f.terms()) {
    out << format_double(t.omega) << ',' << format_double(t.q.real()) << ',' << format_double(t.q.imag()) << '\n';
  }
}

void write_zero_set(std::ostream& out, const ZeroSet& a) {
  out << kZeroSetHeader << '\n';
  for (const auto& z : a.points()) out << format_double(z.point) << ',' << z.multiplicity << '\n';
}

void write_point_measure(std::ostream& out, const PointMeasure& mu) {
  out << kMeasureHeader << '\n';
  bool wrote_d = false;
  auto write_d = [&] {
    out << "0," << format_double(mu.d()) << ",0\n";
    wrote_d = true;
  };
  for (const auto& at : mu.atoms()) {
    if (!wrote_d && at.gamma > 0.0) write_d();
    out << format_double(at.gamma) << ',' << format_double(at.b.real()) << ',' << format_double(at.b.imag()) << '\n';
  }
  if (!wrote_d) write_d();
}

}  // namespace qclab
