// Copyright 2026 The nameorigin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nameorigin/service.h"

#include <stdexcept>
#include <utility>
#include <variant>

#include "httplib.h"
#include "json.hpp"
#include "nameorigin/result_json.h"

namespace nameorigin {
namespace {

ServiceResponse Error(int status, const std::string& reason) {
  nlohmann::ordered_json j;
  j["error"] = reason;
  return {status, j.dump()};
}

// Either a normalized name or a 400 response.
std::variant<FullName, ServiceResponse> ParseName(const QueryParams& q) {
  auto first = q.find("first");
  auto last = q.find("last");
  if (first == q.end() || first->second.empty())
    return Error(400, "missing parameter 'first'");
  if (last == q.end() || last->second.empty())
    return Error(400, "missing parameter 'last'");
  auto parsed = NormalizeName(first->second + " " + last->second,
                              MultiPartPolicy::kJoinMiddle);
  if (auto* reason = std::get_if<RejectReason>(&parsed))
    return Error(400, "unusable name: " + std::string(RejectReasonCode(*reason)));
  return std::get<FullName>(std::move(parsed));
}

}  // namespace

QueryService::QueryService(std::shared_ptr<const NameClassifier> nationality,
                           std::shared_ptr<const EthnicityModel> ethnicity,
                           ClassifierOptions ethnicity_options)
    : nationality_(std::move(nationality)), ethnicity_(std::move(ethnicity)) {
  if (ethnicity_)
    ethnicity_classifier_ =
        std::make_unique<NameClassifier>(ethnicity_->tables, ethnicity_options);
}

ServiceResponse QueryService::HandleClassify(const QueryParams& q) const {
  if (!nationality_) return Error(503, "no nationality model loaded");
  PriorMode mode = PriorMode::kInternet;
  if (auto it = q.find("mode"); it != q.end()) {
    auto m = ParsePriorMode(it->second);
    if (!m) return Error(400, "mode must be 'internet' or 'world'");
    mode = *m;
  }
  auto name = ParseName(q);
  if (auto* err = std::get_if<ServiceResponse>(&name)) return *err;
  return {200, ResultToJson(
                   nationality_->Classify(std::get<FullName>(name), mode))};
}

ServiceResponse QueryService::HandleEthnicity(const QueryParams& q) const {
  if (!ethnicity_classifier_) return Error(503, "no ethnicity model loaded");
  auto name = ParseName(q);
  if (auto* err = std::get_if<ServiceResponse>(&name)) return *err;
  return {200, ResultToJson(ethnicity_classifier_->Classify(
                   std::get<FullName>(name), PriorMode::kWorld))};
}

ServiceResponse QueryService::Handle(std::string_view path,
                                     const QueryParams& q) const {
  if (path == "/classify") return HandleClassify(q);
  if (path == "/ethnicity") return HandleEthnicity(q);
  return Error(404, "unknown path");
}

HttpServer::HttpServer(std::shared_ptr<const QueryService> service)
    : service_(std::move(service)), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    QueryParams q;
    for (const auto& [k, v] : req.params) q.emplace(k, v);
    ServiceResponse r = service_->Handle(req.path, q);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  // No SO_REUSEPORT: a second server on a busy port must fail to bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes),
               sizeof(yes));
  });
  server_->Get("/classify", handler);
  server_->Get("/ethnicity", handler);
  server_->set_error_handler(
      [](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
          nlohmann::ordered_json j;
          j["error"] = res.status == 404 ? "unknown path" : "bad request";
          res.set_content(j.dump(), "application/json");
        }
      });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0)
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port) +
                             " (port busy?)");
  return bound;
}

void HttpServer::Run() { server_->listen_after_bind(); }

void HttpServer::Stop() {
  if (server_) server_->stop();
}

}  // namespace nameorigin
