#include <thread>

#include "neuroembed/error.hpp"
#include "neuroembed/service.hpp"

// must come after Eigen
#include <httplib.h>

namespace neuroembed {
namespace {

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, "application/json");
}

void install_routes(httplib::Server& server, SearchService& service) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Post("/v1/query", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.handle_query(req.body));
  });
  server.Get(R"(/v1/cohorts/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.handle_get_cohort(req.matches[1].str()));
  });
  server.Get("/v1/stats", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.handle_stats());
  });
  server.Get("/v1/health", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.handle_health());
  });
  server.Post("/v1/reload", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.handle_reload(req.body));
  });
}

}  // namespace

bool serve_http(SearchService& service, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, service);
  return server.listen(host, port);
}

struct HttpServer::Impl {
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(SearchService& service, const std::string& host, int port) : impl_(std::make_unique<Impl>()) {
  install_routes(impl_->server, service);
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::running() const { return impl_ && impl_->server.is_running(); }

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace neuroembed
