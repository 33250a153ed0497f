#include <httplib.h>

#include <algorithm>
#include <array>

#include "facadex/error.hpp"
#include "facadex/resolve/source.hpp"
#include "facadex/util/text.hpp"

namespace facadex::resolve {
namespace {

constexpr std::array<std::string_view, 6> kMethods{"GET", "POST", "PUT", "DELETE", "HEAD",
                                                   "PATCH"};

std::string encodeQueryComponent(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

struct UrlParts {
  std::string schemeHostPort;
  std::string pathAndQuery;
};

UrlParts splitUrl(const std::string& url) {
  auto schemeEnd = url.find("://");
  if (schemeEnd == std::string::npos) {
    throw Error(ErrorKind::UnsupportedScheme, "not an HTTP URL: " + url);
  }
  auto pathStart = url.find_first_of("/?#", schemeEnd + 3);
  UrlParts parts;
  parts.schemeHostPort = url.substr(0, pathStart);
  parts.pathAndQuery = pathStart == std::string::npos ? "/" : url.substr(pathStart);
  if (auto hash = parts.pathAndQuery.find('#'); hash != std::string::npos) {
    parts.pathAndQuery.erase(hash);
  }
  if (parts.pathAndQuery.empty() || parts.pathAndQuery[0] == '?') {
    parts.pathAndQuery.insert(0, "/");
  }
  return parts;
}

}  // namespace

HttpRequestPlan buildHttpRequestPlan(const std::string& location,
                                     const config::FacadeOptions& options) {
  HttpRequestPlan plan;
  auto lower = util::toLower(location);
  if (!lower.starts_with("http://") && !lower.starts_with("https://")) {
    throw Error(ErrorKind::UnsupportedScheme, "not an HTTP URL: " + location);
  }
  if (auto method = options.get(config::opt::kHttpMethod)) {
    std::string upper;
    for (char c : *method) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (std::find(kMethods.begin(), kMethods.end(), upper) == kMethods.end()) {
      throw Error(ErrorKind::Config, "unsupported http.method '" + *method + "'");
    }
    plan.method = upper;
  }
  for (auto& [name, value] : options.withPrefix(config::opt::kHttpHeaderPrefix)) {
    auto existing = std::find_if(plan.headers.begin(), plan.headers.end(),
                                 [&](const auto& h) { return util::iequals(h.first, name); });
    if (existing != plan.headers.end()) plan.headers.erase(existing);
    plan.headers.emplace_back(name, value);
  }
  plan.queryParams = options.withPrefix(config::opt::kHttpQueryPrefix);

  auto user = options.get(config::opt::kHttpAuthUser);
  auto password = options.get(config::opt::kHttpAuthPassword);
  if (user || password) plan.basicAuth = std::pair{user.value_or(""), password.value_or("")};

  std::string url = location;
  std::string fragment;
  if (auto hash = url.find('#'); hash != std::string::npos) {
    fragment = url.substr(hash);
    url.erase(hash);
  }
  for (const auto& [name, value] : plan.queryParams) {
    url += url.find('?') == std::string::npos ? '?' : '&';
    url += encodeQueryComponent(name) + "=" + encodeQueryComponent(value);
  }
  plan.url = url + fragment;
  return plan;
}

HttpResponse executeHttp(const HttpRequestPlan& plan, const ResolverPolicy& policy) {
  auto parts = splitUrl(plan.url);
  httplib::Client client(parts.schemeHostPort);
  if (!client.is_valid()) {
    throw Error(ErrorKind::UnsupportedScheme, "cannot create HTTP client for " + plan.url);
  }
  client.set_follow_location(true);
  client.set_connection_timeout(policy.timeout);
  client.set_read_timeout(policy.timeout);
  client.set_write_timeout(policy.timeout);
  if (plan.basicAuth) client.set_basic_auth(plan.basicAuth->first, plan.basicAuth->second);

  httplib::Request request;
  request.method = plan.method;
  request.path = parts.pathAndQuery;
  for (const auto& [name, value] : plan.headers) request.headers.emplace(name, value);

  auto result = client.send(request);
  if (!result) {
    throw Error(ErrorKind::Network,
                "HTTP " + plan.method + " " + plan.url + " failed: " + httplib::to_string(result.error()));
  }
  HttpResponse response;
  response.status = result->status;
  response.body = std::move(result->body);
  response.contentType = result->get_header_value("Content-Type");
  if (response.status >= 400) {
    throw Error(ErrorKind::HttpStatus, "HTTP " + plan.method + " " + plan.url + " returned status " +
                                           std::to_string(response.status));
  }
  return response;
}

}  // namespace facadex::resolve
