#pragma once

// Pluggable LLM boundary. Fixture adapters replay canned translations from
// JSON files so the whole pipeline runs offline; the HTTP adapter is a
// minimal vendor-neutral POST with a bearer token from SFF_LLM_API_KEY.

#include <memory>
#include <string>

#include "sff/errors.hpp"

namespace sff::feedback {

struct AdapterRequest {
    std::string system;
    std::string user;
};

class TranslatorAdapter {
  public:
    virtual ~TranslatorAdapter() = default;
    virtual std::string name() const = 0;
    virtual std::string complete(const AdapterRequest& req) = 0;
};

// Replays the JSON document at `path` (AdapterUnavailable when missing).
std::unique_ptr<TranslatorAdapter> make_fixture_adapter(const std::string& path);

// Returns the request's user payload verbatim (test double).
std::unique_ptr<TranslatorAdapter> make_echo_adapter();

struct HttpAdapterConfig {
    std::string endpoint;  // http://host:port/path
    std::string model;
    double timeout_s = 30.0;
    std::string api_key_env = "SFF_LLM_API_KEY";
};

std::unique_ptr<TranslatorAdapter> make_http_adapter(HttpAdapterConfig cfg);

// Adapter spec strings: "fixture:<path>", "echo", "http:<endpoint>".
std::unique_ptr<TranslatorAdapter> make_adapter(const std::string& spec,
                                                const std::string& fixtures_dir = "fixtures",
                                                const HttpAdapterConfig& http_defaults = {});

}  // namespace sff::feedback
