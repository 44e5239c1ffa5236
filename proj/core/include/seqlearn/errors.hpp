#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqlearn {

// precondition violated by the caller (bad depth, empty move, zero-weight prefix, ...)
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// a resource ceiling was hit (stream cache cap, ...)
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a search-based construction ran out of budget; block is the 1-based block index
struct construction_error : std::runtime_error {
    std::size_t block;
    construction_error(std::string msg, std::size_t blk)
        : std::runtime_error(std::move(msg)), block(blk) {}
};

// conditional queried on a zero-weight cylinder
struct undefined_conditional : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a law declared full support but produced a conditional outside (0,1)
struct support_error : std::logic_error {
    using std::logic_error::logic_error;
};

// malformed config / registry expression
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// game strategy broke the rules; offender names the side
struct rule_violation : std::runtime_error {
    std::string offender;
    rule_violation(std::string msg, std::string who)
        : std::runtime_error(std::move(msg)), offender(std::move(who)) {}
};

// ball shrink could not certify any radius down to the floor
struct shrink_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace seqlearn
