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

#ifndef NAMEORIGIN_SERVICE_H_
#define NAMEORIGIN_SERVICE_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "nameorigin/classifier.h"
#include "nameorigin/ethnicity.h"

namespace httplib {
class Server;
}

namespace nameorigin {

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

using QueryParams = std::map<std::string, std::string>;

// Request handling without any transport. Bodies are pure functions of the
// loaded tables and the query. Name content is never logged.
class QueryService {
 public:
  QueryService(std::shared_ptr<const NameClassifier> nationality,
               std::shared_ptr<const EthnicityModel> ethnicity,
               ClassifierOptions ethnicity_options = {});

  // GET /classify?first=&last=&mode=   (mode defaults to internet)
  ServiceResponse HandleClassify(const QueryParams& q) const;
  // GET /ethnicity?first=&last=
  ServiceResponse HandleEthnicity(const QueryParams& q) const;
  ServiceResponse Handle(std::string_view path, const QueryParams& q) const;

 private:
  std::shared_ptr<const NameClassifier> nationality_;
  std::shared_ptr<const EthnicityModel> ethnicity_;
  std::unique_ptr<NameClassifier> ethnicity_classifier_;
};

// HTTP/1.1 front end over a QueryService.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const QueryService> service);
  ~HttpServer();

  // Binds; throws std::runtime_error when the port is unavailable. Port 0
  // picks a free port. Returns the bound port.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); in-flight requests complete first.
  void Run();
  void Stop();

 private:
  std::shared_ptr<const QueryService> service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace nameorigin

#endif  // NAMEORIGIN_SERVICE_H_
