#pragma once

#include <string>

#include "seqlearn/config.hpp"
#include "seqlearn/report.hpp"

namespace seqlearn {

/* Exit codes: 0 ran and nothing contradicted the config, 1 a refuted verdict
 * appeared where `expect = consistent` was asserted, 2 configuration error,
 * 3 resource or search-budget exhaustion.  Higher-numbered causes win. */
struct RunResult {
    int exit_code = 0;
    std::string message;
    RunReport report;
};

// dispatches on the "command" key; failures land in exit_code/message, not throws
RunResult run(const Config& cfg);

}  // namespace seqlearn
