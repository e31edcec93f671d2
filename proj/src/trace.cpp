#include "gces/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gces/errors.hpp"

namespace gces {

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

double parse_double(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw ParseError(line, "trailing characters in '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError(line, "not a number: '" + tok + "'");
  } catch (const std::out_of_range&) {
    // stod rejects subnormals; strtod handles them.
    return std::strtod(tok.c_str(), nullptr);
  }
}

}  // namespace

std::string format_trace_csv(const std::vector<IterationTrace>& trace) {
  std::string out = kTraceCsvHeader;
  out += '\n';
  for (const auto& r : trace) {
    out += std::to_string(r.k);
    for (double v : {r.F, r.gap, r.dist, r.L, r.alpha, r.gamma, r.lambda}) {
      out += ',';
      append_double(out, v);
    }
    out += ',';
    out += std::to_string(r.grad_calls);
    out += ',';
    out += std::to_string(r.prox_calls);
    out += ',';
    append_double(out, r.sec);
    out += '\n';
  }
  return out;
}

void emit_trace_csv(const std::vector<IterationTrace>& trace, const std::string& path) {
  if (trace.empty()) throw InvalidArgument("emit_trace_csv: empty trace");
  const std::string text = format_trace_csv(trace);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("emit_trace_csv: cannot open " + path);
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw Error("emit_trace_csv: write failed for " + path);
}

std::vector<IterationTrace> read_trace_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("read_trace_csv: cannot open " + path);
  std::string line;
  std::getline(is, line);
  if (line != kTraceCsvHeader) throw ParseError(1, "unexpected trace header");
  std::vector<IterationTrace> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> tok;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) tok.push_back(cell);
    if (tok.size() != 11) throw ParseError(lineno, "expected 11 columns");
    IterationTrace r;
    r.k = std::stoull(tok[0]);
    r.F = parse_double(tok[1], lineno);
    r.gap = parse_double(tok[2], lineno);
    r.dist = parse_double(tok[3], lineno);
    r.L = parse_double(tok[4], lineno);
    r.alpha = parse_double(tok[5], lineno);
    r.gamma = parse_double(tok[6], lineno);
    r.lambda = parse_double(tok[7], lineno);
    r.grad_calls = std::stoull(tok[8]);
    r.prox_calls = std::stoull(tok[9]);
    r.sec = parse_double(tok[10], lineno);
    out.push_back(r);
  }
  return out;
}

std::optional<std::size_t> iterations_to_gap(const std::vector<IterationTrace>& trace, double tol) {
  for (const auto& r : trace) {
    if (r.gap <= tol) return r.k;
  }
  return std::nullopt;
}

void annotate(IterationTrace& row, const DenseVector& x, const std::optional<Reference>& ref) {
  if (!ref) return;
  row.gap = row.F - ref->f_star;
  row.dist = (x - ref->x_star).norm();
}

}  // namespace gces
