#pragma once

namespace seqlearn {

enum class Verdict { consistent, refuted, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::refuted: return "refuted";
        default: return "inconclusive";
    }
}

}  // namespace seqlearn
