#include "brickvm/gateway/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <deque>
#include <spdlog/spdlog.h>

#include "brickvm/support/text.hpp"

namespace brickvm::gateway {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

inline constexpr std::string_view kAssetPrefix = "/assets/";

class Client;

struct Server::Impl {
    Impl(Session& s, ServerOptions o) : session(s), options(std::move(o)), acceptor(ioc) {}

    Session& session;
    ServerOptions options;
    net::io_context ioc{1};
    tcp::acceptor acceptor;
    std::weak_ptr<Client> active;  // io thread only

    void accept();
    void publish(std::string frame);
};

namespace {

std::string content_type(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : text::to_lower(path.substr(dot));
    if (ext == ".png") return "image/png";
    if (ext == ".wav") return "audio/wav";
    if (ext == ".mp3") return "audio/mpeg";
    return "application/octet-stream";
}

}  // namespace

class Client : public std::enable_shared_from_this<Client> {
public:
    Client(tcp::socket socket, Server::Impl& server) : ws_(std::move(socket)), server_(server) {}

    void accept(http::request<http::string_body> request) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.text(true);
        ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
    }

    void push_frame(std::string frame) {
        latest_ = std::move(frame);
        flush();
    }

    void close() {
        if (closed_) return;
        closed_ = true;
        beast::error_code ec;
        beast::get_lowest_layer(ws_).socket().close(ec);
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) return;
        if (auto other = server_.active.lock(); other && other.get() != this) {
            spdlog::warn("refusing a second client");
            closing_ = true;
            send(encode(error_message("busy", "session busy")));
            return;
        }
        server_.active = shared_from_this();
        spdlog::info("client connected");
        send(encode(hello_message(server_.session.project(), std::string(kAssetPrefix))));
        read();
    }

    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
    }

    void on_read(beast::error_code ec) {
        if (ec) {
            if (ec != websocket::error::closed) spdlog::debug("client read: {}", ec.message());
            spdlog::info("client disconnected");
            closed_ = true;
            return;
        }
        std::string data = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        try {
            server_.session.submit(parse_client_message(decode(data)));
        } catch (const WireError& e) {
            spdlog::warn("bad client message: {}", e.what());
            send(encode(error_message(e.code(), e.what())));
        }
        read();
    }

    void send(std::string message) {
        queue_.push_back(std::move(message));
        flush();
    }

    void flush() {
        if (writing_ || closed_) return;
        if (!queue_.empty()) {
            current_ = std::move(queue_.front());
            queue_.pop_front();
        } else if (latest_ && !closing_) {
            current_ = std::move(*latest_);
            latest_.reset();
        } else {
            if (closing_) {
                closed_ = true;
                ws_.async_close(websocket::close_code::try_again_later, [self = shared_from_this()](beast::error_code) {});
            }
            return;
        }
        writing_ = true;
        ws_.async_write(net::buffer(current_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->writing_ = false;
            if (ec) {
                self->closed_ = true;
                return;
            }
            self->flush();
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    Server::Impl& server_;
    beast::flat_buffer buffer_;
    std::deque<std::string> queue_;     // hello and errors, never dropped
    std::optional<std::string> latest_;  // newest undelivered frame
    std::string current_;
    bool writing_ = false;
    bool closing_ = false;
    bool closed_ = false;
};

namespace {

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
public:
    HttpConnection(tcp::socket socket, Server::Impl& server) : stream_(std::move(socket)), server_(server) {}

    void start() { read(); }

private:
    void read() {
        request_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, request_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
    }

    void on_read(beast::error_code ec) {
        if (ec) return;
        if (websocket::is_upgrade(request_) && request_.target() == "/") {
            stream_.expires_never();
            std::make_shared<Client>(stream_.release_socket(), server_)->accept(std::move(request_));
            return;
        }
        respond();
    }

    void respond() {
        auto response = std::make_shared<http::response<http::vector_body<std::uint8_t>>>();
        response->version(request_.version());
        response->keep_alive(request_.keep_alive());
        response->set(http::field::server, "brickvm");
        response->set(http::field::access_control_allow_origin, "*");
        std::string target(request_.target());
        const auto& assets = server_.session.project().assets;
        auto it = assets.end();
        if (target.starts_with(kAssetPrefix)) it = assets.find(text::percent_unescape(target.substr(kAssetPrefix.size())));
        if (request_.method() != http::verb::get && request_.method() != http::verb::head) {
            response->result(http::status::method_not_allowed);
        } else if (it == assets.end()) {
            response->result(http::status::not_found);
            std::string body = "not found\n";
            response->body().assign(body.begin(), body.end());
            response->set(http::field::content_type, "text/plain");
        } else {
            response->result(http::status::ok);
            response->set(http::field::content_type, content_type(it->first));
            if (request_.method() == http::verb::get) response->body() = it->second;
        }
        response->prepare_payload();
        if (request_.method() == http::verb::head) response->body().clear();
        spdlog::debug("{} {} -> {}", std::string(request_.method_string()), target, response->result_int());
        http::async_write(stream_, *response, [self = shared_from_this(), response](beast::error_code ec, std::size_t) {
            if (ec) return;
            if (response->keep_alive()) {
                self->read();
            } else {
                beast::error_code ignored;
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
            }
        });
    }

    beast::tcp_stream stream_;
    Server::Impl& server_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
};

}  // namespace

void Server::Impl::accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
        if (ec) {
            if (ec != net::error::operation_aborted) spdlog::warn("accept: {}", ec.message());
            if (!acceptor.is_open()) return;
        } else {
            std::make_shared<HttpConnection>(std::move(socket), *this)->start();
        }
        accept();
    });
}

void Server::Impl::publish(std::string frame) {
    net::post(ioc, [this, frame = std::move(frame)]() mutable {
        if (auto c = active.lock()) c->push_frame(std::move(frame));
    });
}

Server::Server(Session& session, ServerOptions options) : impl_(std::make_unique<Impl>(session, std::move(options))) {
    beast::error_code ec;
    auto address = net::ip::make_address(impl_->options.address, ec);
    if (ec) throw std::runtime_error("bad bind address '" + impl_->options.address + "'");
    tcp::endpoint endpoint(address, impl_->options.port);
    auto& a = impl_->acceptor;
    a.open(endpoint.protocol(), ec);
    if (!ec) a.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) a.bind(endpoint, ec);
    if (!ec) a.listen(net::socket_base::max_listen_connections, ec);
    if (ec) throw std::runtime_error("cannot listen on " + impl_->options.address + ":" + std::to_string(impl_->options.port) + ": " + ec.message());
}

Server::~Server() {
    stop();
    impl_->session.stop_thread();
}

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
    spdlog::info("serving {} on {}:{}", impl_->session.project().header.name, impl_->options.address, port());
    impl_->session.start_thread([impl = impl_.get()](const Message& m) { impl->publish(encode(m)); });
    impl_->accept();
    net::signal_set signals(impl_->ioc);
    if (impl_->options.handle_signals) {
        signals.add(SIGINT);
        signals.add(SIGTERM);
        signals.async_wait([this](beast::error_code ec, int) {
            if (!ec) stop();
        });
    }
    impl_->ioc.run();
    impl_->session.stop_thread();
}

void Server::stop() { impl_->ioc.stop(); }

}  // namespace brickvm::gateway
