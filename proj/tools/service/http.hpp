#pragma once

namespace httplib {
class Server;
}

namespace gp::service {

class Service;

/// Registers the /api routes on `server`. `service` must outlive it.
void mount(httplib::Server& server, Service& service);

}  // namespace gp::service
