#pragma once

#include <string>
#include <vector>

#include "seqlearn/extrapolation.hpp"
#include "seqlearn/index_set.hpp"
#include "seqlearn/measures.hpp"
#include "seqlearn/stream.hpp"

namespace seqlearn {

/* Tiny expression grammar shared by config files and the CLI:
 *   expr  := atom | name '(' expr, ... ')' | '[' expr, ... ']'
 *   atom  := bare token or "quoted string"
 * e.g.  combine-nv(always-0, [all-ones, alternating])  or  bernoulli(9/10). */
struct Expr {
    std::string atom;  // leaf payload; empty for calls and lists
    std::string head;  // call name; empty for leaves and lists
    std::vector<Expr> args;
    bool list = false;

    bool leaf() const { return !list && head.empty(); }
    std::string show() const;
};

Expr parse_expr(const std::string& text);

// builders for every registered name; unknown names raise config errors
Extrapolator make_extrapolator(const Expr& e);
BitStream make_stream(const Expr& e);
ConditionalLaw make_law(const Expr& e);
IndexSet make_schedule(const Expr& e);

Extrapolator make_extrapolator(const std::string& expr);
BitStream make_stream(const std::string& expr);
ConditionalLaw make_law(const std::string& expr);
IndexSet make_schedule(const std::string& expr);

// fixed rosters exercised by the batch runner and the acceptance checks
std::vector<std::string> standard_extrapolators();
std::vector<std::string> standard_corpus();

}  // namespace seqlearn
