#pragma once

// Report plumbing: deterministic float formatting (17 significant digits),
// CSV assembly, and a bounded worker pool capped by HARDYLAB_THREADS.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hardylab::report {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<std::string>& r) {
    if (r.size() != header.size()) throw std::logic_error("csv row width mismatch");
    rows.push_back(r);
  }
  std::string to_string() const {
    std::string out;
    for (size_t i = 0; i < header.size(); ++i) {
      out += header[i];
      out += (i + 1 < header.size()) ? "," : "";
    }
    out += '\n';
    for (const auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i) {
        out += r[i];
        out += (i + 1 < r.size()) ? "," : "";
      }
      out += '\n';
    }
    return out;
  }
  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << to_string();
  }
};

inline int worker_count() {
  if (const char* env = std::getenv("HARDYLAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? (int)hw : 1;
}

// Index-parallel map with deterministic (index-addressed) output.
inline void parallel_for(long n, const std::function<void(long)>& fn) {
  int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace hardylab::report
