#include "sff/feedback/adapter.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>

namespace sff::feedback {

namespace {

class FixtureAdapter final : public TranslatorAdapter {
  public:
    FixtureAdapter(std::string path, std::string content)
        : path_(std::move(path)), content_(std::move(content)) {}

    std::string name() const override { return "fixture:" + path_; }
    std::string complete(const AdapterRequest&) override { return content_; }

  private:
    std::string path_;
    std::string content_;
};

class EchoAdapter final : public TranslatorAdapter {
  public:
    std::string name() const override { return "echo"; }
    std::string complete(const AdapterRequest& req) override { return req.user; }
};

class HttpAdapter final : public TranslatorAdapter {
  public:
    explicit HttpAdapter(HttpAdapterConfig cfg) : cfg_(std::move(cfg)) {}

    std::string name() const override { return "http:" + cfg_.endpoint; }

    std::string complete(const AdapterRequest& req) override {
        std::string host, path;
        split_endpoint(cfg_.endpoint, host, path);
        httplib::Client client(host);
        client.set_connection_timeout(static_cast<time_t>(cfg_.timeout_s),
                                      static_cast<time_t>((cfg_.timeout_s -
                                                           static_cast<time_t>(cfg_.timeout_s)) *
                                                          1e6));
        client.set_read_timeout(static_cast<time_t>(cfg_.timeout_s), 0);
        httplib::Headers headers;
        if (const char* key = std::getenv(cfg_.api_key_env.c_str()))
            headers.emplace("Authorization", std::string("Bearer ") + key);
        std::string body = "{\"system\":" + quote(req.system) + ",\"user\":" + quote(req.user);
        if (!cfg_.model.empty()) body += ",\"model\":" + quote(cfg_.model);
        body += "}";
        auto res = client.Post(path, headers, body, "application/json");
        if (!res)
            throw AdapterUnavailable("no response from " + cfg_.endpoint + " (" +
                                     httplib::to_string(res.error()) + ")");
        if (res->status != 200)
            throw AdapterUnavailable("HTTP " + std::to_string(res->status) + " from " +
                                     cfg_.endpoint);
        return res->body;
    }

  private:
    static void split_endpoint(const std::string& endpoint, std::string& host,
                               std::string& path) {
        auto scheme = endpoint.find("://");
        auto path_start = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
        if (path_start == std::string::npos) {
            host = endpoint;
            path = "/";
        } else {
            host = endpoint.substr(0, path_start);
            path = endpoint.substr(path_start);
        }
    }

    static std::string quote(const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                default: out += c;
            }
        }
        return out + "\"";
    }

    HttpAdapterConfig cfg_;
};

}  // namespace

std::unique_ptr<TranslatorAdapter> make_fixture_adapter(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw AdapterUnavailable("fixture file '" + path + "' not found");
    std::stringstream ss;
    ss << in.rdbuf();
    return std::make_unique<FixtureAdapter>(path, ss.str());
}

std::unique_ptr<TranslatorAdapter> make_echo_adapter() { return std::make_unique<EchoAdapter>(); }

std::unique_ptr<TranslatorAdapter> make_http_adapter(HttpAdapterConfig cfg) {
    return std::make_unique<HttpAdapter>(std::move(cfg));
}

std::unique_ptr<TranslatorAdapter> make_adapter(const std::string& spec,
                                                const std::string& fixtures_dir,
                                                const HttpAdapterConfig& http_defaults) {
    if (spec == "echo") return make_echo_adapter();
    if (spec.rfind("fixture:", 0) == 0) {
        std::string key = spec.substr(8);
        // a bare key resolves inside the fixtures directory
        if (key.find('/') == std::string::npos)
            key = fixtures_dir + "/" + key + (key.ends_with(".json") ? "" : ".json");
        return make_fixture_adapter(key);
    }
    if (spec.rfind("http:", 0) == 0 || spec.rfind("https:", 0) == 0) {
        HttpAdapterConfig cfg = http_defaults;
        if (spec != "http") cfg.endpoint = spec;
        return make_http_adapter(std::move(cfg));
    }
    throw AdapterUnavailable("unknown adapter spec '" + spec + "'");
}

}  // namespace sff::feedback
