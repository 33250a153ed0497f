#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "facadex/endpoint/server.hpp"
#include "facadex/error.hpp"

namespace {

facadex::endpoint::Server* running = nullptr;

void onSignal(int) {
  if (running) running->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPARQL endpoint over the Facade-X engine", "fx-server"};
  facadex::endpoint::EndpointConfig config;
  std::optional<std::string> load;
  long timeoutMs = config.timeout.count();
  bool noLocalFiles = false;

  app.add_option("--port", config.port, "listening port")->check(CLI::Range(0, 65535));
  app.add_option("--bind", config.bindAddress, "listening address");
  app.add_option("-l,--load", load, "RDF file or directory served as the default graph");
  app.add_option("--timeout", timeoutMs, "query time limit in milliseconds")->check(CLI::PositiveNumber);
  app.add_option("--max-body", config.maxBodyBytes, "request body limit in bytes");
  app.add_flag("--no-local-files", noLocalFiles, "refuse file and command sources");
  CLI11_PARSE(app, argc, argv);

  if (load) config.load = *load;
  config.timeout = std::chrono::milliseconds(timeoutMs);
  config.allowLocalFiles = !noLocalFiles;
  try {
    facadex::endpoint::Server server(config);
    int port = server.bind();
    std::cerr << "fx-server listening on http://" << config.bindAddress << ":" << port << "/sparql\n";
    running = &server;
    std::signal(SIGINT, onSignal);
    std::signal(SIGTERM, onSignal);
    server.serve();
    running = nullptr;
  } catch (const facadex::Error& e) {
    std::cerr << "fx-server: " << e.what() << "\n";
    return e.kind() == facadex::ErrorKind::Usage ? 2 : 1;
  }
  return 0;
}
