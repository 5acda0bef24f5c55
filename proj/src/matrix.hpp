#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fq.hpp"
#include "rng.hpp"

namespace sparkppr {

struct TextParseError : std::runtime_error {
  TextParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  std::size_t line;
};

// Dense row-major matrix over a prime field. Treated as an immutable value
// once built: operations return new matrices, and a constructed matrix can be
// shared freely across threads. Empty shapes (0 rows and/or 0 columns) are
// legal.
class FqMatrix {
 public:
  FqMatrix() : FqMatrix(FieldSpec(2), 0, 0) {}  // empty binary matrix

  FqMatrix(FieldSpec field, std::uint32_t rows, std::uint32_t cols)
      : field_(field), rows_(rows), cols_(cols),
        entries_(static_cast<std::size_t>(rows) * cols, 0) {}

  FqMatrix(FieldSpec field, std::uint32_t rows, std::uint32_t cols,
           std::vector<std::uint32_t> entries);

  static FqMatrix identity(FieldSpec field, std::uint32_t n);
  static FqMatrix random(FieldSpec field, std::uint32_t rows,
                         std::uint32_t cols, Rng& rng);

  const FieldSpec& field() const { return field_; }
  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  std::uint32_t at(std::uint32_t r, std::uint32_t c) const {
    return entries_[static_cast<std::size_t>(r) * cols_ + c];
  }
  void set(std::uint32_t r, std::uint32_t c, std::uint32_t v) {
    entries_[static_cast<std::size_t>(r) * cols_ + c] = v;
  }

  std::span<const std::uint32_t> row(std::uint32_t r) const {
    return {entries_.data() + static_cast<std::size_t>(r) * cols_, cols_};
  }
  std::span<const std::uint32_t> entries() const { return entries_; }

  FqMatrix transposed() const;
  FqMatrix select_rows(std::span<const std::uint32_t> idx) const;
  FqMatrix select_cols(std::span<const std::uint32_t> idx) const;
  FqMatrix vstack(const FqMatrix& below) const;
  FqMatrix hstack(const FqMatrix& right) const;
  FqMatrix negated() const;
  FqMatrix add(const FqMatrix& o) const;
  FqMatrix sub(const FqMatrix& o) const;

  bool operator==(const FqMatrix& o) const {
    return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ &&
           entries_ == o.entries_;
  }
  // Row-major entry order; shapes must match.
  bool lex_less(const FqMatrix& o) const { return entries_ < o.entries_; }

  // Text format: header "q rows cols", then one line per row of
  // space-separated decimal entries. Round-trips bit-exactly.
  std::string to_text() const;
  static FqMatrix from_text(const std::string& text);

 private:
  FieldSpec field_;
  std::uint32_t rows_;
  std::uint32_t cols_;
  std::vector<std::uint32_t> entries_;
};

FqMatrix mat_mul(const FqMatrix& a, const FqMatrix& b);
std::uint32_t rank(const FqMatrix& a);

enum class SolveStatus { Unique, Underdetermined, Inconsistent };

struct SolveResult {
  SolveStatus status;
  std::optional<FqMatrix> solution;  // set iff status == Unique
  bool unique() const { return status == SolveStatus::Unique; }
};

// Solves a * X = rhs. Returns the unique X when rank(a) == a.cols() and the
// system is consistent; otherwise reports whether the system was
// underdetermined or inconsistent.
SolveResult solve_unique(const FqMatrix& a, const FqMatrix& rhs);

namespace detail {

// Bit-packed GF(2) rows, one row = words of 64 columns.
struct BitMatrix {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::uint32_t words = 0;  // words per row
  std::vector<std::uint64_t> data;

  static BitMatrix from(const FqMatrix& m);
  FqMatrix unpack(const FieldSpec& field) const;
  std::uint64_t* row(std::uint32_t r) { return data.data() + static_cast<std::size_t>(r) * words; }
  const std::uint64_t* row(std::uint32_t r) const {
    return data.data() + static_cast<std::size_t>(r) * words;
  }
};

std::uint32_t rank_generic(const FqMatrix& a);
std::uint32_t rank_gf2(const FqMatrix& a);
FqMatrix mul_generic(const FqMatrix& a, const FqMatrix& b);
FqMatrix mul_gf2(const FqMatrix& a, const FqMatrix& b);

}  // namespace detail

}  // namespace sparkppr
