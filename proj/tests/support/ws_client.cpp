#include "ws_client.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <stdexcept>

namespace brickvm::testing {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

struct WsClient::Impl {
    net::io_context ioc;
    websocket::stream<tcp::socket> ws{ioc};
    beast::flat_buffer buffer;
    bool closed = false;
};

WsClient::WsClient(unsigned short port) : impl_(std::make_unique<Impl>()) {
    tcp::resolver resolver(impl_->ioc);
    net::connect(impl_->ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    impl_->ws.handshake("127.0.0.1:" + std::to_string(port), "/");
    impl_->ws.text(true);
}

WsClient::~WsClient() {
    try {
        close();
    } catch (...) {
    }
}

void WsClient::send(const gateway::Message& message) { send_raw(gateway::encode(message)); }

void WsClient::send_raw(const std::string& data) { impl_->ws.write(net::buffer(data)); }

gateway::Message WsClient::receive() {
    impl_->buffer.consume(impl_->buffer.size());
    impl_->ws.read(impl_->buffer);
    return gateway::decode(beast::buffers_to_string(impl_->buffer.data()));
}

gateway::Message WsClient::until(const std::function<bool(const gateway::Message&)>& pred, int limit) {
    for (int i = 0; i < limit; ++i) {
        auto m = receive();
        if (pred(m)) return m;
    }
    throw std::runtime_error("expected message never arrived");
}

bool WsClient::closed_by_server() {
    beast::error_code ec;
    impl_->buffer.consume(impl_->buffer.size());
    impl_->ws.read(impl_->buffer, ec);
    if (ec) impl_->closed = true;
    return impl_->closed;
}

void WsClient::close() {
    if (impl_->closed) return;
    impl_->closed = true;
    beast::error_code ec;
    impl_->ws.close(websocket::close_code::normal, ec);
}

std::pair<int, std::string> http_get(unsigned short port, const std::string& target) {
    net::io_context ioc;
    tcp::socket socket(ioc);
    tcp::resolver resolver(ioc);
    net::connect(socket, resolver.resolve("127.0.0.1", std::to_string(port)));
    http::request<http::empty_body> req{http::verb::get, target, 11};
    req.set(http::field::host, "127.0.0.1");
    req.keep_alive(false);
    http::write(socket, req);
    beast::flat_buffer buffer;
    http::response<http::string_body> res;
    http::read(socket, buffer, res);
    beast::error_code ec;
    socket.shutdown(tcp::socket::shutdown_both, ec);
    return {res.result_int(), res.body()};
}

namespace {

gateway::ServerOptions local_any_port() {
    gateway::ServerOptions o;
    o.port = 0;
    return o;
}

}  // namespace

RunningServer::RunningServer(model::Project project, gateway::SessionOptions options)
    : session_(std::move(project), std::move(options)), server_(session_, local_any_port()), thread_([this] { server_.run(); }) {}

RunningServer::~RunningServer() { stop(); }

void RunningServer::stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace brickvm::testing
