#include "matrix.hpp"

#include <charconv>
#include <sstream>

namespace sparkppr {

FqMatrix::FqMatrix(FieldSpec field, std::uint32_t rows, std::uint32_t cols,
                   std::vector<std::uint32_t> entries)
    : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("matrix entry count does not match shape");
  }
  for (std::uint32_t e : entries_) {
    if (e >= field_.q()) {
      throw std::invalid_argument("matrix entry " + std::to_string(e) +
                                  " outside field of size " +
                                  std::to_string(field_.q()));
    }
  }
}

FqMatrix FqMatrix::identity(FieldSpec field, std::uint32_t n) {
  FqMatrix m(field, n, n);
  for (std::uint32_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

FqMatrix FqMatrix::random(FieldSpec field, std::uint32_t rows,
                          std::uint32_t cols, Rng& rng) {
  FqMatrix m(field, rows, cols);
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < cols; ++c)
      m.set(r, c, static_cast<std::uint32_t>(rng.below(field.q())));
  return m;
}

FqMatrix FqMatrix::transposed() const {
  FqMatrix t(field_, cols_, rows_);
  for (std::uint32_t r = 0; r < rows_; ++r)
    for (std::uint32_t c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
  return t;
}

FqMatrix FqMatrix::select_rows(std::span<const std::uint32_t> idx) const {
  FqMatrix out(field_, static_cast<std::uint32_t>(idx.size()), cols_);
  for (std::uint32_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= rows_) throw std::out_of_range("row index out of range");
    for (std::uint32_t c = 0; c < cols_; ++c) out.set(i, c, at(idx[i], c));
  }
  return out;
}

FqMatrix FqMatrix::select_cols(std::span<const std::uint32_t> idx) const {
  FqMatrix out(field_, rows_, static_cast<std::uint32_t>(idx.size()));
  for (std::uint32_t r = 0; r < rows_; ++r)
    for (std::uint32_t i = 0; i < idx.size(); ++i) {
      if (idx[i] >= cols_) throw std::out_of_range("column index out of range");
      out.set(r, i, at(r, idx[i]));
    }
  return out;
}

FqMatrix FqMatrix::vstack(const FqMatrix& below) const {
  if (below.cols_ != cols_ || !(below.field_ == field_))
    throw std::invalid_argument("vstack shape or field mismatch");
  FqMatrix out(field_, rows_ + below.rows_, cols_);
  std::copy(entries_.begin(), entries_.end(), out.entries_.begin());
  std::copy(below.entries_.begin(), below.entries_.end(),
            out.entries_.begin() + entries_.size());
  return out;
}

FqMatrix FqMatrix::hstack(const FqMatrix& right) const {
  if (right.rows_ != rows_ || !(right.field_ == field_))
    throw std::invalid_argument("hstack shape or field mismatch");
  FqMatrix out(field_, rows_, cols_ + right.cols_);
  for (std::uint32_t r = 0; r < rows_; ++r) {
    for (std::uint32_t c = 0; c < cols_; ++c) out.set(r, c, at(r, c));
    for (std::uint32_t c = 0; c < right.cols_; ++c)
      out.set(r, cols_ + c, right.at(r, c));
  }
  return out;
}

FqMatrix FqMatrix::negated() const {
  FqMatrix out = *this;
  for (auto& e : out.entries_) e = field_.neg(e);
  return out;
}

FqMatrix FqMatrix::add(const FqMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || !(field_ == o.field_))
    throw std::invalid_argument("matrix add shape or field mismatch");
  FqMatrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = field_.add(entries_[i], o.entries_[i]);
  return out;
}

FqMatrix FqMatrix::sub(const FqMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || !(field_ == o.field_))
    throw std::invalid_argument("matrix sub shape or field mismatch");
  FqMatrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = field_.sub(entries_[i], o.entries_[i]);
  return out;
}

std::string FqMatrix::to_text() const {
  std::string out = std::to_string(field_.q()) + " " + std::to_string(rows_) +
                    " " + std::to_string(cols_) + "\n";
  for (std::uint32_t r = 0; r < rows_; ++r) {
    for (std::uint32_t c = 0; c < cols_; ++c) {
      if (c) out += ' ';
      out += std::to_string(at(r, c));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::uint64_t> parse_numbers(const std::string& line,
                                         std::size_t line_no) {
  std::vector<std::uint64_t> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p != end) {
    if (*p == ' ' || *p == '\t' || *p == '\r') {
      ++p;
      continue;
    }
    std::uint64_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) {
      throw TextParseError(line_no, "expected a number, got '" +
                                        std::string(p, end) + "'");
    }
    out.push_back(v);
    p = next;
  }
  return out;
}

}  // namespace

FqMatrix FqMatrix::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw TextParseError(1, "empty matrix file");
  ++line_no;
  const auto header = parse_numbers(line, line_no);
  if (header.size() != 3)
    throw TextParseError(line_no, "header must be 'q rows cols'");
  if (header[0] < 2 || header[0] > 0xffffffffull || !is_prime(static_cast<std::uint32_t>(header[0])))
    throw TextParseError(line_no, "field size must be prime");
  const FieldSpec field(static_cast<std::uint32_t>(header[0]));
  const auto rows = static_cast<std::uint32_t>(header[1]);
  const auto cols = static_cast<std::uint32_t>(header[2]);
  FqMatrix m(field, rows, cols);
  for (std::uint32_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      throw TextParseError(line_no + 1, "unexpected end of file: expected " +
                                            std::to_string(rows) + " rows");
    ++line_no;
    const auto vals = parse_numbers(line, line_no);
    if (vals.size() != cols)
      throw TextParseError(line_no, "expected " + std::to_string(cols) +
                                        " entries, got " +
                                        std::to_string(vals.size()));
    for (std::uint32_t c = 0; c < cols; ++c) {
      if (vals[c] >= field.q())
        throw TextParseError(line_no, "entry " + std::to_string(vals[c]) +
                                          " outside field");
      m.set(r, c, static_cast<std::uint32_t>(vals[c]));
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!parse_numbers(line, line_no).empty())
      throw TextParseError(line_no, "trailing data after matrix rows");
  }
  return m;
}

namespace detail {

BitMatrix BitMatrix::from(const FqMatrix& m) {
  BitMatrix b;
  b.rows = m.rows();
  b.cols = m.cols();
  b.words = (m.cols() + 63) / 64;
  b.data.assign(static_cast<std::size_t>(b.rows) * b.words, 0);
  for (std::uint32_t r = 0; r < b.rows; ++r) {
    std::uint64_t* row = b.row(r);
    for (std::uint32_t c = 0; c < b.cols; ++c)
      if (m.at(r, c)) row[c >> 6] |= 1ull << (c & 63);
  }
  return b;
}

FqMatrix BitMatrix::unpack(const FieldSpec& field) const {
  FqMatrix m(field, rows, cols);
  for (std::uint32_t r = 0; r < rows; ++r) {
    const std::uint64_t* src = row(r);
    for (std::uint32_t c = 0; c < cols; ++c)
      m.set(r, c, (src[c >> 6] >> (c & 63)) & 1u);
  }
  return m;
}

std::uint32_t rank_gf2(const FqMatrix& a) {
  BitMatrix b = BitMatrix::from(a);
  std::uint32_t r = 0;
  for (std::uint32_t c = 0; c < b.cols && r < b.rows; ++c) {
    const std::uint32_t word = c >> 6;
    const std::uint64_t mask = 1ull << (c & 63);
    std::uint32_t pivot = r;
    while (pivot < b.rows && !(b.row(pivot)[word] & mask)) ++pivot;
    if (pivot == b.rows) continue;
    if (pivot != r) {
      for (std::uint32_t w = 0; w < b.words; ++w)
        std::swap(b.row(pivot)[w], b.row(r)[w]);
    }
    for (std::uint32_t i = pivot + 1; i < b.rows; ++i) {
      if (b.row(i)[word] & mask) {
        const std::uint64_t* src = b.row(r);
        std::uint64_t* dst = b.row(i);
        for (std::uint32_t w = word; w < b.words; ++w) dst[w] ^= src[w];
      }
    }
    ++r;
  }
  return r;
}

std::uint32_t rank_generic(const FqMatrix& a) {
  const FieldSpec& f = a.field();
  FqMatrix m = a;
  std::uint32_t r = 0;
  for (std::uint32_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    // First nonzero entry in the leftmost unfinished column.
    std::uint32_t pivot = r;
    while (pivot < m.rows() && m.at(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r)
      for (std::uint32_t j = 0; j < m.cols(); ++j) {
        const std::uint32_t t = m.at(pivot, j);
        m.set(pivot, j, m.at(r, j));
        m.set(r, j, t);
      }
    const std::uint32_t pin = f.inv(m.at(r, c));
    for (std::uint32_t i = r + 1; i < m.rows(); ++i) {
      const std::uint32_t factor = f.mul(m.at(i, c), pin);
      if (factor == 0) continue;
      for (std::uint32_t j = c; j < m.cols(); ++j)
        m.set(i, j, f.sub(m.at(i, j), f.mul(factor, m.at(r, j))));
    }
    ++r;
  }
  return r;
}

FqMatrix mul_generic(const FqMatrix& a, const FqMatrix& b) {
  const FieldSpec& f = a.field();
  FqMatrix out(f, a.rows(), b.cols());
  for (std::uint32_t i = 0; i < a.rows(); ++i) {
    for (std::uint32_t k = 0; k < a.cols(); ++k) {
      const std::uint32_t aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::uint32_t j = 0; j < b.cols(); ++j) {
        out.set(i, j, f.add(out.at(i, j), f.mul(aik, b.at(k, j))));
      }
    }
  }
  return out;
}

FqMatrix mul_gf2(const FqMatrix& a, const FqMatrix& b) {
  const BitMatrix bb = BitMatrix::from(b);
  BitMatrix acc;
  acc.rows = a.rows();
  acc.cols = b.cols();
  acc.words = bb.words;
  acc.data.assign(static_cast<std::size_t>(acc.rows) * acc.words, 0);
  for (std::uint32_t i = 0; i < a.rows(); ++i) {
    std::uint64_t* dst = acc.row(i);
    for (std::uint32_t k = 0; k < a.cols(); ++k) {
      if (a.at(i, k)) {
        const std::uint64_t* src = bb.row(k);
        for (std::uint32_t w = 0; w < acc.words; ++w) dst[w] ^= src[w];
      }
    }
  }
  return acc.unpack(a.field());
}

}  // namespace detail

FqMatrix mat_mul(const FqMatrix& a, const FqMatrix& b) {
  if (!(a.field() == b.field()))
    throw std::invalid_argument("matrix product across different fields");
  if (a.cols() != b.rows())
    throw std::invalid_argument("matrix product dimension mismatch: " +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()));
  if (a.field().q() == 2) return detail::mul_gf2(a, b);
  return detail::mul_generic(a, b);
}

std::uint32_t rank(const FqMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  if (a.field().q() == 2) return detail::rank_gf2(a);
  return detail::rank_generic(a);
}

SolveResult solve_unique(const FqMatrix& a, const FqMatrix& rhs) {
  if (a.rows() != rhs.rows())
    throw std::invalid_argument("solve: row count mismatch");
  const FieldSpec& f = a.field();
  // Eliminate on the augmented matrix [a | rhs].
  FqMatrix m = a.hstack(rhs);
  const std::uint32_t n = a.cols();
  std::vector<std::uint32_t> pivot_col;
  std::uint32_t r = 0;
  for (std::uint32_t c = 0; c < n && r < m.rows(); ++c) {
    std::uint32_t pivot = r;
    while (pivot < m.rows() && m.at(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r)
      for (std::uint32_t j = 0; j < m.cols(); ++j) {
        const std::uint32_t t = m.at(pivot, j);
        m.set(pivot, j, m.at(r, j));
        m.set(r, j, t);
      }
    const std::uint32_t pin = f.inv(m.at(r, c));
    if (pin != 1)
      for (std::uint32_t j = c; j < m.cols(); ++j)
        m.set(r, j, f.mul(pin, m.at(r, j)));
    for (std::uint32_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      const std::uint32_t factor = m.at(i, c);
      if (factor == 0) continue;
      for (std::uint32_t j = c; j < m.cols(); ++j)
        m.set(i, j, f.sub(m.at(i, j), f.mul(factor, m.at(r, j))));
    }
    pivot_col.push_back(c);
    ++r;
  }
  // Any leftover row with zero coefficients but a nonzero right side marks
  // an inconsistent system.
  for (std::uint32_t i = r; i < m.rows(); ++i) {
    for (std::uint32_t j = n; j < m.cols(); ++j) {
      if (m.at(i, j) != 0) return {SolveStatus::Inconsistent, std::nullopt};
    }
  }
  if (r < n) return {SolveStatus::Underdetermined, std::nullopt};
  FqMatrix x(f, n, rhs.cols());
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < rhs.cols(); ++j)
      x.set(pivot_col[i], j, m.at(i, n + j));
  return {SolveStatus::Unique, std::move(x)};
}

}  // namespace sparkppr
