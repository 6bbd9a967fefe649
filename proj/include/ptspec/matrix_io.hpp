#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ptspec/complex_matrix.hpp"

namespace ptspec {

/// Textual matrix dump, round-trippable at full double precision.
/// Layout (whitespace separated):
///   ptspec-matrix 1
///   potential <name>
///   coupling <value>
///   dim <N>
///   re im re im ...   (N lines of N complex entries, row-major)
struct MatrixDump {
  ComplexMatrix matrix;
  std::string potential;
  double coupling = 0.0;
};

inline void save_matrix(std::ostream& os, const ComplexMatrix& m,
                        const std::string& potential, double coupling) {
  os << "ptspec-matrix 1\n";
  os << "potential " << potential << "\n";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", coupling);
  os << "coupling " << buf << "\n";
  os << "dim " << m.dim() << "\n";
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      const Complex& z = m(i, j);
      std::snprintf(buf, sizeof buf, "%.17g", z.real());
      os << (j ? " " : "") << buf;
      std::snprintf(buf, sizeof buf, "%.17g", z.imag());
      os << ' ' << buf;
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("save_matrix: write failed");
}

inline void save_matrix(const std::string& path, const ComplexMatrix& m,
                        const std::string& potential, double coupling) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_matrix: cannot open " + path);
  save_matrix(os, m, potential, coupling);
}

inline MatrixDump load_matrix(std::istream& is) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "ptspec-matrix" || version != 1)
    throw std::runtime_error("load_matrix: not a ptspec-matrix v1 stream");
  MatrixDump out;
  std::string key;
  std::size_t dim = 0;
  is >> key >> out.potential;
  if (key != "potential") throw std::runtime_error("load_matrix: expected potential");
  is >> key >> out.coupling;
  if (key != "coupling") throw std::runtime_error("load_matrix: expected coupling");
  is >> key >> dim;
  if (key != "dim" || dim == 0) throw std::runtime_error("load_matrix: bad dim");
  out.matrix = ComplexMatrix(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      double re = 0.0, im = 0.0;
      if (!(is >> re >> im))
        throw std::runtime_error("load_matrix: truncated entry block");
      out.matrix(i, j) = Complex(re, im);
    }
  return out;
}

inline MatrixDump load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_matrix: cannot open " + path);
  return load_matrix(is);
}

}  // namespace ptspec
