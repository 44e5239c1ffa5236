#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seqlearn/rational.hpp"

namespace seqlearn {

// one step of an exact-arithmetic trace; `value` steps are axioms (inputs),
// every other op is recomputed from earlier steps on replay
struct TraceStep {
    enum class Op { value, add, sub, mul, div, neg, abs, min, max };
    Op op = Op::value;
    std::size_t a = 0, b = 0;
    Rational val;
    std::string label;
};

enum class Relation { le, ge, lt, gt };

const char* to_string(TraceStep::Op op);
const char* to_string(Relation rel);

struct Certificate {
    std::string kind;  // contains | bad_gap | superbad_count
    std::vector<std::pair<std::string, std::uint64_t>> premises;  // label, digest
    std::vector<TraceStep> trace;
    std::size_t lhs = 0, rhs = 0;
    Relation rel = Relation::le;
    std::string note;
};

// grows a trace and remembers step indices
class TraceBuilder {
  public:
    explicit TraceBuilder(std::string kind) { cert_.kind = std::move(kind); }

    std::size_t value(const Rational& q, std::string label = "");
    std::size_t add(std::size_t a, std::size_t b, std::string label = "");
    std::size_t sub(std::size_t a, std::size_t b, std::string label = "");
    std::size_t mul(std::size_t a, std::size_t b, std::string label = "");
    std::size_t div(std::size_t a, std::size_t b, std::string label = "");
    std::size_t neg(std::size_t a, std::string label = "");
    std::size_t abs(std::size_t a, std::string label = "");
    std::size_t min(std::size_t a, std::size_t b, std::string label = "");
    std::size_t max(std::size_t a, std::size_t b, std::string label = "");

    const Rational& at(std::size_t i) const { return cert_.trace[i].val; }
    void premise(std::string label, std::uint64_t digest);
    Certificate conclude(std::size_t lhs, Relation rel, std::size_t rhs, std::string note = "");

  private:
    std::size_t push(TraceStep::Op op, std::size_t a, std::size_t b, Rational v, std::string label);
    Certificate cert_;
};

// recomputes every non-value step, then checks the concluded relation
bool replay(const Certificate& cert);

std::string to_text(const Certificate& cert);
Certificate parse_certificate(const std::string& text);

}  // namespace seqlearn
