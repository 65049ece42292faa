// Expression parser and canonical serializer for polynomials, differential
// forms, and multivector fields.
//
// Grammar (whitespace-insensitive):
//   expr   := wedge (('+'|'-') wedge)*
//   wedge  := mul ('^' mul)*              -- wedge product
//   mul    := unary ('*' unary)*
//   unary  := '-' unary | power
//   power  := atom ['^' INTEGER]          -- scalar power, binds tighter than '*'
//   atom   := NUMBER | x<i> | dx<i> | e<i> | '(' expr ')'
// NUMBER is a rational literal: digits, optionally '/' digits.  x<i> is the
// i-th coordinate, dx<i> the basis covector, e<i> the basis vector d/dx_i
// (1-based, bounded by the declared dimension).  The caret is a wedge unless
// immediately followed by an integer literal.
#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "nambu/exterior.hpp"

namespace nambu {

struct SourcePos {
    int line = 1;
    int col = 1;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, SourcePos pos)
        : std::runtime_error(msg + " (line " + std::to_string(pos.line) + ", column " +
                             std::to_string(pos.col) + ")"),
          pos_(pos) {}
    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

enum class ValueKind { scalar, form, multivector };

using Value = std::variant<Poly, DiffForm, MultiVector>;

// Parses text into a value of the expected kind on dim-space.  Scalars embed
// into either exterior kind as degree-0 values.
Value parse_expression(const std::string& text, int dim, ValueKind expected);

Poly parse_poly(const std::string& text, int dim);
DiffForm parse_form(const std::string& text, int dim);
MultiVector parse_multivector(const std::string& text, int dim);

// Canonical text; parse(serialize(v)) == v structurally.
std::string serialize(const Poly& p);
std::string serialize(const DiffForm& w);
std::string serialize(const MultiVector& p);
std::string serialize(const Value& v);

}  // namespace nambu
