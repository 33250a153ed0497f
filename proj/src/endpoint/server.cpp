#include "facadex/endpoint/server.hpp"

#include <httplib.h>

#include <algorithm>

#include "facadex/cli/results.hpp"
#include "facadex/error.hpp"
#include "facadex/log.hpp"
#include "facadex/query/parser.hpp"
#include "facadex/rdf/io.hpp"
#include "facadex/util/text.hpp"

namespace facadex::endpoint {
namespace {

using cli::ResultFormat;

struct AcceptEntry {
  std::string type;
  double q = 1.0;
};

std::vector<AcceptEntry> parseAccept(std::string_view header) {
  std::vector<AcceptEntry> entries;
  for (const auto& part : util::split(header, ',')) {
    auto fields = util::split(part, ';');
    AcceptEntry e;
    e.type = util::toLower(util::trim(fields[0]));
    if (e.type.empty()) continue;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto param = util::trim(fields[i]);
      if (param.starts_with("q=")) {
        try {
          e.q = std::stod(std::string(param.substr(2)));
        } catch (const std::exception&) {
          e.q = 0;
        }
      }
    }
    entries.push_back(std::move(e));
  }
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.q > b.q; });
  return entries;
}

std::optional<ResultFormat> formatForType(std::string_view type, query::QueryForm form) {
  if (form == query::QueryForm::Construct) {
    if (type == "text/turtle") return ResultFormat::Turtle;
    if (type == "application/n-triples") return ResultFormat::NTriples;
    if (type == "application/n-quads") return ResultFormat::NQuads;
  } else {
    if (type == "application/sparql-results+json" || type == "application/json") return ResultFormat::Json;
    if (type == "text/csv") return ResultFormat::Csv;
    if (type == "application/sparql-results+xml") return ResultFormat::Xml;
  }
  return std::nullopt;
}

// Unsupported types fall back to the default for the query form.
ResultFormat negotiate(std::string_view accept, query::QueryForm form) {
  for (const auto& e : parseAccept(accept)) {
    if (e.q <= 0) continue;
    if (auto f = formatForType(e.type, form)) return *f;
  }
  return cli::defaultFormat(form);
}

Response plain(int status, std::string body) {
  return {status, "text/plain; charset=utf-8", std::move(body) + "\n"};
}

}  // namespace

void validateConfig(const EndpointConfig& config) {
  if (config.port < 0 || config.port > 65535) {
    throw Error(ErrorKind::Usage, "port must be in [1, 65535] (0 picks a free port), got " + std::to_string(config.port));
  }
  if (config.timeout.count() <= 0) throw Error(ErrorKind::Usage, "timeout must be positive");
}

QueryService::QueryService(EndpointConfig config) : config_(std::move(config)) {
  validateConfig(config_);
  if (config_.load) base_ = rdf::loadRdf(*config_.load);
}

Response QueryService::answer(std::string_view queryText, std::string_view accept) const {
  query::Query q;
  try {
    q = query::parseQuery(queryText);
  } catch (const Error& e) {
    return plain(400, std::string("query parse error: ") + e.what());
  }
  query::EngineOptions options;
  options.timeout = config_.timeout;
  options.policy.allowLocalFiles = config_.allowLocalFiles;
  options.policy.allowCommands = config_.allowLocalFiles;
  try {
    auto result = query::execute(q, base_, options);
    auto format = negotiate(accept, q.form);
    std::string type(cli::mediaTypeOf(format));
    if (type.starts_with("text/")) type += "; charset=utf-8";
    return {200, type, cli::formatResult(result, format)};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Timeout) return plain(504, e.what());
    return plain(500, std::string(toString(e.kind())) + ": " + e.what());
  } catch (const std::exception& e) {
    return plain(500, e.what());
  }
}

struct Server::Impl {
  explicit Impl(EndpointConfig config) : service(std::move(config)) {}

  QueryService service;
  httplib::Server http;
  int port = -1;
};

Server::Server(EndpointConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
  auto& http = impl_->http;
  const auto& service = impl_->service;
  http.set_payload_max_length(service.config().maxBodyBytes);

  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.contentType);
  };
  http.Get("/sparql", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("query")) {
      reply(res, plain(400, "missing 'query' parameter"));
      return;
    }
    reply(res, service.answer(req.get_param_value("query"), req.get_header_value("Accept")));
  });
  http.Post("/sparql", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    auto type = util::toLower(util::trim(util::split(req.get_header_value("Content-Type"), ';')[0]));
    std::string text;
    if (type == "application/sparql-query") {
      text = req.body;
    } else if (type == "application/x-www-form-urlencoded") {
      if (!req.has_param("query")) {
        reply(res, plain(400, "missing 'query' form field"));
        return;
      }
      text = req.get_param_value("query");
    } else {
      reply(res, plain(415, "unsupported content type '" + type + "'"));
      return;
    }
    reply(res, service.answer(text, req.get_header_value("Accept")));
  });
  http.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    log::info(req.method + " " + req.path + " -> " + std::to_string(res.status));
  });
}

Server::~Server() { stop(); }

int Server::bind() {
  if (impl_->port >= 0) return impl_->port;
  const auto& cfg = impl_->service.config();
  if (cfg.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(cfg.bindAddress);
  } else if (impl_->http.bind_to_port(cfg.bindAddress, cfg.port)) {
    impl_->port = cfg.port;
  }
  if (impl_->port < 0) {
    throw Error(ErrorKind::Io, "cannot bind " + cfg.bindAddress + ":" + std::to_string(cfg.port));
  }
  return impl_->port;
}

bool Server::serve() {
  bind();
  return impl_->http.listen_after_bind();
}

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace facadex::endpoint
