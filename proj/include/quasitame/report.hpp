#pragma once

// Reports: one classification result with its trace and payload, plus the
// JSON schema (version 1) used by the CLI.
//
// {
//   "schema_version": 1,
//   "input": {"format": "product" | "invsys" | "discrete", "text": <canonical input>},
//   "verdict": {"tame", "relatively_tame", "relative_basis", ["compact", "locally_compact"]},
//   "trace": [{"id", "theorem", "detail"}],
//   "certificate" | "witness": {...},
//   "timing_ms": <number>
// }
//
// Keys are sorted; apart from timing_ms the output depends only on the input.

#include "quasitame/dsl.hpp"
#include "quasitame/pro.hpp"
#include "quasitame/product.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace quasitame {

inline constexpr int kSchemaVersion = 1;

enum class InputFormat { Product, InvSys, Discrete };
const char *to_string(InputFormat f);
InputFormat format_of(const GroupExpr &e);

using ReportPayload = std::variant<TameCertificate, Witness, ProCertificate, ProWitness>;

struct Report {
  InputFormat format = InputFormat::Product;
  std::string input;
  bool tame = false;
  bool relatively_tame = false;
  std::string relative_basis; // "definition" | "theorem"
  std::optional<bool> compact;          // inverse systems only
  std::optional<bool> locally_compact;  // inverse systems only
  std::vector<TraceStep> trace;
  ReportPayload payload;
  double timing_ms = 0;

  bool has_certificate() const {
    return std::holds_alternative<TameCertificate>(payload) ||
           std::holds_alternative<ProCertificate>(payload);
  }
};

struct AnalyzeOptions {
  bool explain = false;
  std::optional<std::size_t> horizon; // inverse systems only
};

/// A discrete group G as the product G × 0 × 0 × ...
SequenceSpec discrete_as_product(const GroupDescriptor &g);

/// Classifies any parsed input. Throws whatever the classifiers throw.
Report analyze(const GroupExpr &e, const AnalyzeOptions &opts = {});

std::string to_json(const Report &r);
/// Throws Error(Schema) on anything that does not match the schema.
Report report_from_json(const std::string &text);

/// Human-readable rendering for the CLI.
std::string to_text(const Report &r);

/// Re-validates a report against its input. Empty iff valid.
std::vector<std::string> check_report(const GroupExpr &input, const Report &r);

} // namespace quasitame
