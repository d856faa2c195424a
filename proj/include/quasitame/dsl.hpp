#pragma once

// Text formats.
//
// .qcg
//   expr     := discrete | "prod" "n" ":" [ "[" discrete ("," discrete)* "]" ] tail
//   tail     := template (";" template)*
//   template := term ("+" term)*
//   term     := atom ["^" mult]
//   atom     := "Z" | "Q" | "0" | "C(" base ["^" exp] ")" | "C(" base "^inf)"
//             | "tower(" base "," affine ["," int] ")"
//   base     := int | "p(" affine ")"          p(k) is the k-th prime, p(1) = 2
//   exp      := int | affine | "(" affine ")"
//   affine   := int | "n" | "n+" int | int "*n" | int "*n+" int
//   mult     := int | "omega"
// Composite bases are split into prime powers. "#" starts a comment.
//
// .invsys
//   levels:   one matrix block per prefix level (its relation matrix)
//   maps:     one block per map level i+1 -> level i
//   tail:
//     level:      relations of T
//     accumulate: relations of A        (optional)
//     coupling:   C                     (optional)
//     descent:    T -> T
//     splice:     T + A -> last prefix level (only with a prefix)
// A matrix block is "rows cols" followed by rows*cols integers.

#include "quasitame/pro.hpp"
#include "quasitame/product.hpp"

#include <string>
#include <variant>

namespace quasitame {

using GroupExpr = std::variant<SequenceSpec, InverseSystem, GroupDescriptor>;

/// Throws SyntaxError or SemanticError.
GroupExpr parse(const std::string &text);
std::string pretty(const GroupExpr &e);

GroupDescriptor parse_descriptor(const std::string &text);
EntryTemplate parse_template(const std::string &text);
SequenceSpec parse_product(const std::string &text);
InverseSystem parse_invsys(const std::string &text);
std::string pretty_invsys(const InverseSystem &s);

} // namespace quasitame
