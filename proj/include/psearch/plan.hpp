#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psearch {

enum class OpKind { G1, G2, Ga };

struct PlanStep {
  OpKind kind;
  std::int64_t power;  // >= 0
};

// Steps are stored in operator-string order: steps.front() acts last on the
// state, steps.back() acts first.  An empty plan is the identity.
struct IterationPlan {
  std::vector<PlanStep> steps;
};

struct PlanParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::G1: return "G1";
    case OpKind::G2: return "G2";
    case OpKind::Ga: return "Ga";
  }
  return "?";
}

inline std::string to_string(const IterationPlan& plan) {
  std::string out;
  for (const PlanStep& s : plan.steps) {
    if (!out.empty()) out += ',';
    out += to_string(s.kind);
    out += ':';
    out += std::to_string(s.power);
  }
  return out;
}

// Parses "G1:5,G2:3,Ga:2" (whitespace around tokens ignored).  The literal is
// read left to right in operator order, matching the written operator string.
inline IterationPlan parse_plan(std::string_view text) {
  IterationPlan plan;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front())))
      token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back())))
      token.remove_suffix(1);
    if (!token.empty()) {
      const std::size_t colon = token.find(':');
      if (colon == std::string_view::npos)
        throw PlanParseError("plan step '" + std::string(token) +
                             "' is not of the form KIND:power");
      const std::string_view name = token.substr(0, colon);
      const std::string_view num = token.substr(colon + 1);
      OpKind kind;
      if (name == "G1")
        kind = OpKind::G1;
      else if (name == "G2")
        kind = OpKind::G2;
      else if (name == "Ga")
        kind = OpKind::Ga;
      else
        throw PlanParseError("unknown operator '" + std::string(name) +
                             "' (expected G1, G2 or Ga)");
      std::int64_t power = 0;
      if (num.empty()) throw PlanParseError("missing power in '" + std::string(token) + "'");
      for (char c : num) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
          throw PlanParseError("power '" + std::string(num) +
                               "' is not a nonnegative integer");
        power = power * 10 + (c - '0');
        if (power > (std::int64_t{1} << 40))
          throw PlanParseError("power '" + std::string(num) + "' is too large");
      }
      plan.steps.push_back({kind, power});
    }
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  return plan;
}

// Rewrites every Ga:j step as G1:1,G2:j,G1:1; G1/G2 steps pass through.
inline IterationPlan expand_auxiliary(const IterationPlan& plan) {
  IterationPlan out;
  for (const PlanStep& s : plan.steps) {
    if (s.kind == OpKind::Ga) {
      out.steps.push_back({OpKind::G1, 1});
      out.steps.push_back({OpKind::G2, s.power});
      out.steps.push_back({OpKind::G1, 1});
    } else {
      out.steps.push_back(s);
    }
  }
  return out;
}

}  // namespace psearch
