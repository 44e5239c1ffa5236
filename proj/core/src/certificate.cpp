#include "seqlearn/certificate.hpp"

#include <sstream>

#include "seqlearn/errors.hpp"

namespace seqlearn {

const char* to_string(TraceStep::Op op) {
    switch (op) {
        case TraceStep::Op::value: return "value";
        case TraceStep::Op::add: return "add";
        case TraceStep::Op::sub: return "sub";
        case TraceStep::Op::mul: return "mul";
        case TraceStep::Op::div: return "div";
        case TraceStep::Op::neg: return "neg";
        case TraceStep::Op::abs: return "abs";
        case TraceStep::Op::min: return "min";
        default: return "max";
    }
}

const char* to_string(Relation rel) {
    switch (rel) {
        case Relation::le: return "<=";
        case Relation::ge: return ">=";
        case Relation::lt: return "<";
        default: return ">";
    }
}

namespace {

TraceStep::Op parse_op(const std::string& s) {
    using Op = TraceStep::Op;
    if (s == "value") return Op::value;
    if (s == "add") return Op::add;
    if (s == "sub") return Op::sub;
    if (s == "mul") return Op::mul;
    if (s == "div") return Op::div;
    if (s == "neg") return Op::neg;
    if (s == "abs") return Op::abs;
    if (s == "min") return Op::min;
    if (s == "max") return Op::max;
    throw precondition_error("unknown trace op '" + s + "'");
}

Relation parse_rel(const std::string& s) {
    if (s == "<=") return Relation::le;
    if (s == ">=") return Relation::ge;
    if (s == "<") return Relation::lt;
    if (s == ">") return Relation::gt;
    throw precondition_error("unknown relation '" + s + "'");
}

Rational evaluate(const Certificate& cert, const TraceStep& st) {
    using Op = TraceStep::Op;
    auto arg = [&](std::size_t i) -> const Rational& { return cert.trace[i].val; };
    switch (st.op) {
        case Op::value: return st.val;
        case Op::add: return arg(st.a) + arg(st.b);
        case Op::sub: return arg(st.a) - arg(st.b);
        case Op::mul: return arg(st.a) * arg(st.b);
        case Op::div: return arg(st.a) / arg(st.b);
        case Op::neg: return -arg(st.a);
        case Op::abs: return rat_abs(arg(st.a));
        case Op::min: return std::min(arg(st.a), arg(st.b));
        default: return std::max(arg(st.a), arg(st.b));
    }
}

}  // namespace

std::size_t TraceBuilder::push(TraceStep::Op op, std::size_t a, std::size_t b, Rational v,
                               std::string label) {
    TraceStep st;
    st.op = op;
    st.a = a;
    st.b = b;
    v.canonicalize();
    st.val = std::move(v);
    st.label = std::move(label);
    cert_.trace.push_back(std::move(st));
    return cert_.trace.size() - 1;
}

std::size_t TraceBuilder::value(const Rational& q, std::string label) {
    return push(TraceStep::Op::value, 0, 0, q, std::move(label));
}
std::size_t TraceBuilder::add(std::size_t a, std::size_t b, std::string label) {
    return push(TraceStep::Op::add, a, b, at(a) + at(b), std::move(label));
}
std::size_t TraceBuilder::sub(std::size_t a, std::size_t b, std::string label) {
    return push(TraceStep::Op::sub, a, b, at(a) - at(b), std::move(label));
}
std::size_t TraceBuilder::mul(std::size_t a, std::size_t b, std::string label) {
    return push(TraceStep::Op::mul, a, b, at(a) * at(b), std::move(label));
}
std::size_t TraceBuilder::div(std::size_t a, std::size_t b, std::string label) {
    if (at(b) == 0) throw precondition_error("trace divides by zero");
    return push(TraceStep::Op::div, a, b, at(a) / at(b), std::move(label));
}
std::size_t TraceBuilder::neg(std::size_t a, std::string label) {
    return push(TraceStep::Op::neg, a, 0, -at(a), std::move(label));
}
std::size_t TraceBuilder::abs(std::size_t a, std::string label) {
    return push(TraceStep::Op::abs, a, 0, rat_abs(at(a)), std::move(label));
}
std::size_t TraceBuilder::min(std::size_t a, std::size_t b, std::string label) {
    return push(TraceStep::Op::min, a, b, std::min(at(a), at(b)), std::move(label));
}
std::size_t TraceBuilder::max(std::size_t a, std::size_t b, std::string label) {
    return push(TraceStep::Op::max, a, b, std::max(at(a), at(b)), std::move(label));
}

void TraceBuilder::premise(std::string label, std::uint64_t digest) {
    cert_.premises.emplace_back(std::move(label), digest);
}

Certificate TraceBuilder::conclude(std::size_t lhs, Relation rel, std::size_t rhs,
                                   std::string note) {
    cert_.lhs = lhs;
    cert_.rel = rel;
    cert_.rhs = rhs;
    cert_.note = std::move(note);
    return std::move(cert_);
}

bool replay(const Certificate& cert) {
    if (cert.lhs >= cert.trace.size() || cert.rhs >= cert.trace.size()) return false;
    for (std::size_t i = 0; i < cert.trace.size(); ++i) {
        const TraceStep& st = cert.trace[i];
        if (st.op != TraceStep::Op::value) {
            if (st.a >= i || (st.b >= i && st.op != TraceStep::Op::neg &&
                              st.op != TraceStep::Op::abs))
                return false;
            if (st.op == TraceStep::Op::div && cert.trace[st.b].val == 0) return false;
            if (evaluate(cert, st) != st.val) return false;
        }
    }
    const Rational& l = cert.trace[cert.lhs].val;
    const Rational& r = cert.trace[cert.rhs].val;
    switch (cert.rel) {
        case Relation::le: return l <= r;
        case Relation::ge: return l >= r;
        case Relation::lt: return l < r;
        default: return l > r;
    }
}

std::string to_text(const Certificate& cert) {
    std::ostringstream out;
    out << "certificate " << cert.kind << "\n";
    for (const auto& [label, digest] : cert.premises)
        out << "premise " << digest << " " << label << "\n";
    for (const auto& st : cert.trace) {
        out << "step " << to_string(st.op) << " " << st.a << " " << st.b << " "
            << st.val.get_num().get_str() << " " << st.val.get_den().get_str();
        if (!st.label.empty()) out << " " << st.label;
        out << "\n";
    }
    out << "conclude " << cert.lhs << " " << to_string(cert.rel) << " " << cert.rhs << "\n";
    if (!cert.note.empty()) out << "note " << cert.note << "\n";
    out << "end\n";
    return out.str();
}

Certificate parse_certificate(const std::string& text) {
    Certificate cert;
    std::istringstream in(text);
    std::string line;
    bool have_kind = false, have_conclusion = false, ended = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "certificate") {
            ls >> cert.kind;
            have_kind = true;
        } else if (tag == "premise") {
            std::uint64_t digest = 0;
            ls >> digest;
            std::string label;
            std::getline(ls, label);
            if (!label.empty() && label.front() == ' ') label.erase(0, 1);
            cert.premises.emplace_back(label, digest);
        } else if (tag == "step") {
            TraceStep st;
            std::string op, num, den;
            ls >> op >> st.a >> st.b >> num >> den;
            if (!ls) throw precondition_error("malformed trace step: " + line);
            st.op = parse_op(op);
            st.val = Rational(BigInt(num), BigInt(den));
            st.val.canonicalize();
            std::string label;
            std::getline(ls, label);
            if (!label.empty() && label.front() == ' ') label.erase(0, 1);
            st.label = label;
            cert.trace.push_back(std::move(st));
        } else if (tag == "conclude") {
            std::string rel;
            ls >> cert.lhs >> rel >> cert.rhs;
            if (!ls) throw precondition_error("malformed conclusion: " + line);
            cert.rel = parse_rel(rel);
            have_conclusion = true;
        } else if (tag == "note") {
            std::string note;
            std::getline(ls, note);
            if (!note.empty() && note.front() == ' ') note.erase(0, 1);
            cert.note = note;
        } else if (tag == "end") {
            ended = true;
            break;
        } else {
            throw precondition_error("unknown certificate line: " + line);
        }
    }
    if (!have_kind || !have_conclusion || !ended)
        throw precondition_error("incomplete certificate record");
    return cert;
}

}  // namespace seqlearn
