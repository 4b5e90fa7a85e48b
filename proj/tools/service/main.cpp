#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "gperiods/error.hpp"
#include "http.hpp"
#include "options.hpp"
#include "service.hpp"

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  gp::service::Config config;
  int port = 8080;
  try {
    config = gp::service::Config::from_env();
    if (const char* p = std::getenv("GP_PORT"); p != nullptr && *p != '\0') {
      port = static_cast<int>(gp::tools::parse_u64(p));
    }
  } catch (const gp::Error& e) {
    std::cerr << "gperiods-serve: error: environment: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"HTTP API for Gaussian period computation and rendering", "gperiods-serve"};
  std::string host = "127.0.0.1";
  app.add_option("--host", host, "address to bind")->capture_default_str();
  app.add_option("--port", port, "port (GP_PORT)")->capture_default_str()->check(CLI::Range(1, 65535));
  app.add_option("--cache-bytes", config.cache_bytes, "orbit cache budget (GP_CACHE_BYTES)")->capture_default_str();
  app.add_option("--workers", config.workers, "compute workers, 0 = all cores")->capture_default_str();
  app.add_option("--bin-threshold", config.bin_threshold, "orbit count above which /api/periods bins")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  gp::service::Service service(config);
  httplib::Server server;
  gp::service::mount(server, service);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  std::cerr << "gperiods-serve: listening on http://" << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "gperiods-serve: error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}
