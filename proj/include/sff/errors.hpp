#pragma once

#include <stdexcept>
#include <string>

namespace sff {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ── stl-core ────────────────────────────────────────────────────────────────

struct SyntaxError : Error {
    std::size_t position;
    std::string expected;
    SyntaxError(std::size_t pos, const std::string& what_expected, const std::string& got)
        : Error("syntax error at position " + std::to_string(pos) + ": expected " +
                what_expected + ", got " + got),
          position(pos),
          expected(what_expected) {}
};

struct UnknownPredicate : Error {
    std::string name;
    explicit UnknownPredicate(const std::string& n)
        : Error("unknown predicate '" + n + "'"), name(n) {}
};

struct BadInterval : Error {
    double a, b;
    BadInterval(double lo, double hi)
        : Error("bad interval [" + std::to_string(lo) + "," + std::to_string(hi) +
                "]: require 0 <= a <= b"),
          a(lo),
          b(hi) {}
};

struct HorizonExceeded : Error {
    explicit HorizonExceeded(const std::string& msg) : Error("horizon exceeded: " + msg) {}
};

struct RegionUnresolved : Error {
    std::string name;
    explicit RegionUnresolved(const std::string& n)
        : Error("region '" + n + "' does not resolve against the scenario"), name(n) {}
};

struct NonlinearAtom : Error {
    std::string name;
    std::string raw;
    NonlinearAtom(const std::string& n, const std::string& definition)
        : Error("predicate '" + n + "' is nonlinear and unsupported: " + definition),
          name(n),
          raw(definition) {}
};

// ── dynamics ────────────────────────────────────────────────────────────────

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};

struct ControlOutOfBounds : Error {
    explicit ControlOutOfBounds(const std::string& msg) : Error("control out of bounds: " + msg) {}
};

// ── reach ───────────────────────────────────────────────────────────────────

struct CflViolation : Error {
    explicit CflViolation(const std::string& msg) : Error("CFL violation: " + msg) {}
};

struct GridMismatch : Error {
    explicit GridMismatch(const std::string& msg) : Error("grid mismatch: " + msg) {}
};

struct OutOfBounds : Error {
    explicit OutOfBounds(const std::string& msg) : Error("query out of grid bounds: " + msg) {}
};

struct UnsupportedNesting : Error {
    explicit UnsupportedNesting(const std::string& msg)
        : Error("unsupported temporal nesting: " + msg) {}
};

// ── planner ─────────────────────────────────────────────────────────────────

struct HorizonTooShort : Error {
    explicit HorizonTooShort(const std::string& msg) : Error("horizon too short: " + msg) {}
};

struct InfeasibleModel : Error {
    explicit InfeasibleModel(const std::string& msg) : Error("infeasible: " + msg) {}
};

struct IterationLimit : Error {
    explicit IterationLimit(const std::string& msg) : Error("iteration limit: " + msg) {}
};

struct EncodingMismatch : Error {
    explicit EncodingMismatch(const std::string& msg) : Error("encoding mismatch: " + msg) {}
};

// ── scenario / cli ──────────────────────────────────────────────────────────

struct SchemaError : Error {
    std::string pointer;  // JSON-pointer path of the offending element
    SchemaError(const std::string& ptr, const std::string& msg)
        : Error("schema error at " + ptr + ": " + msg), pointer(ptr) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error("validation error: " + msg) {}
};

// ── feedback / adapters ─────────────────────────────────────────────────────

struct AdapterUnavailable : Error {
    explicit AdapterUnavailable(const std::string& msg) : Error("adapter unavailable: " + msg) {}
};

struct TranslationError : Error {
    std::string raw;          // raw adapter output, kept for operator inspection
    std::string diagnostics;  // parse/link diagnostics
    TranslationError(const std::string& raw_text, const std::string& diag)
        : Error("translation failed: " + diag), raw(raw_text), diagnostics(diag) {}
};

struct AdapterTimeout : Error {
    explicit AdapterTimeout(const std::string& msg) : Error("adapter timeout: " + msg) {}
};

}  // namespace sff
