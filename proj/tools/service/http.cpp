#include "http.hpp"

#include <httplib.h>

#include "service.hpp"

namespace gp::service {

namespace {

Query to_query(const httplib::Request& req) {
  Query q;
  for (const auto& [key, value] : req.params) q.emplace(key, value);
  return q;
}

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(r.body, r.content_type);
}

}  // namespace

void mount(httplib::Server& server, Service& service) {
  server.Get("/api/periods", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.periods(to_query(req)));
  });
  server.Get("/api/render", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.render(to_query(req)));
  });
  server.Get("/api/fillout", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.fillout(to_query(req)));
  });
  server.Get("/api/stats", [&](const httplib::Request&, httplib::Response& res) { reply(res, service.stats()); });
  server.Get(R"(/api/jobs/([A-Za-z0-9-]+))", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.job(req.matches[1].str()));
  });
}

}  // namespace gp::service
