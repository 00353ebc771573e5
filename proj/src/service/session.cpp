#include "egoexo/service/session.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>

#include "egoexo/errors.hpp"
#include "egoexo/exo/synthesis.hpp"
#include "egoexo/imageio/codec.hpp"
#include "egoexo/rov/mesh.hpp"
#include "egoexo/rov/sampling.hpp"
#include "egoexo/service/transport.hpp"

#ifndef EGOEXO_DEFAULT_DATA_DIR
#define EGOEXO_DEFAULT_DATA_DIR "data"
#endif

namespace egoexo::service {

using Clock = std::chrono::steady_clock;

struct Session::Client {
  Socket socket;
  ServerTransport transport;  // reader thread only, except kind() once decided
  std::atomic<bool> ready{false};
  std::atomic<bool> alive{true};
  std::atomic<bool> reader_done{false};
  std::atomic<bool> writer_done{false};
  std::mutex mutex;
  std::condition_variable cv;
  std::deque<QueuedMessage> queue;
  std::vector<std::uint8_t> direct;  // transport replies, sent before the queue
  bool closing = false;
  std::thread reader;
  std::thread writer;
  std::uint64_t id = 0;
};

namespace {

bool droppable(MessageType t) { return t == MessageType::ego_frame || t == MessageType::map_snapshot; }

std::shared_ptr<const std::vector<std::uint8_t>> shared_bytes(const Message& m) {
  return std::make_shared<const std::vector<std::uint8_t>>(encode(m));
}

}  // namespace

std::size_t enqueue_bounded(std::deque<QueuedMessage>& queue, QueuedMessage message, std::size_t cap) {
  std::size_t dropped = 0;
  if (queue.size() >= cap) {
    const auto it = std::find_if(queue.begin(), queue.end(), [](const QueuedMessage& q) { return droppable(q.type); });
    if (it != queue.end()) {
      queue.erase(it);
      dropped = 1;
    }
  }
  queue.push_back(std::move(message));
  return dropped;
}

Session::Session(SessionConfig config, std::unique_ptr<sim::PoseSource> source, geom::Point3Set cloud)
    : config_(std::move(config)),
      source_(std::move(source)),
      cloud_(std::move(cloud)),
      buffer_((config_.validate(), config_.buffer), config_.intrinsics.width, config_.intrinsics.height) {
  if (!source_) throw ValidationError("session needs a pose source");
  auto empty = std::make_shared<exo::MapSnapshot>();
  empty->history_limit = config_.map_history;
  map_ = std::move(empty);
}

Session::~Session() { stop(); }

void Session::start() {
  if (started_.exchange(true)) throw ValidationError("session already started");
  listener_ = listen_tcp(config_.host, config_.port);
  port_ = local_port(listener_);
  spdlog::info("serving on {}:{} ({} source, n={}, threshold={})", config_.host, port_, config_.source_name(),
               config_.buffer.capacity, config_.buffer.pose_threshold);
  acceptor_ = std::thread([this] { accept_loop(); });
  ingest_ = std::thread([this] { ingest_loop(); });
}

std::size_t Session::client_count() const {
  std::lock_guard lock(clients_mutex_);
  std::size_t n = 0;
  for (const auto& c : clients_) n += c->alive.load() ? 1 : 0;
  return n;
}

Status Session::status(StatusState state, std::string detail, std::string code) const {
  Status s;
  s.state = state;
  s.detail = std::move(detail);
  s.code = std::move(code);
  s.frames_admitted = buffer_.total_admitted();
  s.buffer_size = buffer_.snapshot().size();
  return s;
}

ConfigMessage Session::config_message() const {
  ConfigMessage m;
  m.capacity = config_.buffer.capacity;
  m.pose_threshold = config_.buffer.pose_threshold;
  m.intrinsics = config_.intrinsics;
  m.lambda1 = config_.render.lambda1;
  m.lambda2 = config_.render.lambda2;
  m.point_radius = config_.render.point_radius;
  m.transfer_mode = config_.render.transfer_mode == geom::TransferMode::paper_literal ? "paper_literal" : "standard";
  m.points = cloud_.size();
  m.jpeg_quality = config_.jpeg_quality;
  m.map_history = config_.map_history;
  m.source = config_.source_name();
  return m;
}

void Session::push(Client& client, MessageType type, std::shared_ptr<const std::vector<std::uint8_t>> bytes,
                   bool close_after) {
  {
    std::lock_guard lock(client.mutex);
    if (client.closing) return;
    dropped_.fetch_add(enqueue_bounded(client.queue, {type, std::move(bytes), close_after}));
    if (close_after) client.closing = true;
  }
  client.cv.notify_one();
}

void Session::broadcast(MessageType type, std::vector<std::uint8_t> encoded) {
  auto bytes = std::make_shared<const std::vector<std::uint8_t>>(std::move(encoded));
  std::lock_guard lock(clients_mutex_);
  for (const auto& c : clients_)
    if (c->alive.load() && c->ready.load()) push(*c, type, bytes);
}

void Session::accept_loop() {
  std::uint64_t next_id = 0;
  while (!stopping_.load()) {
    std::optional<Socket> sock;
    try {
      sock = accept_client(listener_, 100);
    } catch (const NetworkError& e) {
      spdlog::warn("accept failed: {}", e.what());
      continue;
    }
    reap_clients(false);
    if (!sock) continue;
    auto client = std::make_shared<Client>();
    client->socket = std::move(*sock);
    client->id = next_id++;
    {
      std::lock_guard lock(report_mutex_);
      ++report_.connections;
    }
    push(*client, MessageType::config, shared_bytes(to_message(config_message())));
    const bool warm = buffer_.snapshot().size() >= 2;
    push(*client, MessageType::status,
         shared_bytes(to_message(status(StatusState::connected, warm ? "ready" : "warming_up"))));
    if (ingest_done_.load()) push(*client, MessageType::status, shared_bytes(to_message(status(StatusState::complete))));
    {
      std::lock_guard lock(clients_mutex_);
      clients_.push_back(client);
    }
    spdlog::debug("client {} connected", client->id);
    client->reader = std::thread([this, client] { reader_loop(client); });
    client->writer = std::thread([this, client] { writer_loop(client); });
  }
}

void Session::reap_clients(bool all) {
  std::list<std::shared_ptr<Client>> done;
  {
    std::lock_guard lock(clients_mutex_);
    for (auto it = clients_.begin(); it != clients_.end();) {
      if (all || ((*it)->reader_done.load() && (*it)->writer_done.load())) {
        done.push_back(*it);
        it = clients_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& c : done) {
    c->alive = false;
    c->socket.shutdown();
    c->cv.notify_all();
    if (c->reader.joinable()) c->reader.join();
    if (c->writer.joinable()) c->writer.join();
  }
}

void Session::writer_loop(const std::shared_ptr<Client>& client) {
  auto& c = *client;
  try {
    while (true) {
      QueuedMessage item;
      std::vector<std::uint8_t> direct;
      {
        std::unique_lock lock(c.mutex);
        c.cv.wait(lock, [&] { return !c.alive.load() || !c.direct.empty() || (c.ready.load() && !c.queue.empty()); });
        if (!c.alive.load()) break;
        direct.swap(c.direct);
        if (direct.empty()) {
          item = std::move(c.queue.front());
          c.queue.pop_front();
        }
      }
      if (!direct.empty()) {
        send_all(c.socket, direct);
        continue;
      }
      send_all(c.socket, c.transport.wrap(*item.bytes));
      if (item.close_after) {
        const auto bye = c.transport.close_frame();
        if (!bye.empty()) send_all(c.socket, bye);
        break;
      }
    }
  } catch (const NetworkError& e) {
    spdlog::debug("client {} send failed: {}", c.id, e.what());
  }
  c.alive = false;
  c.socket.shutdown();
  c.writer_done = true;
}

void Session::reader_loop(const std::shared_ptr<Client>& client) {
  auto& c = *client;
  std::array<std::uint8_t, 65536> buf{};
  auto queue_direct = [&](std::vector<std::uint8_t> bytes) {
    if (bytes.empty()) return;
    {
      std::lock_guard lock(c.mutex);
      c.direct.insert(c.direct.end(), bytes.begin(), bytes.end());
    }
    c.cv.notify_one();
  };
  try {
    while (c.alive.load() && !stopping_.load()) {
      const auto got = recv_some(c.socket, buf, 100);
      if (!got) {
        if (c.transport.assume_raw()) {
          c.ready = true;
          c.cv.notify_one();
        }
        continue;
      }
      if (*got == 0) break;
      ServerTransport::Output out;
      try {
        out = c.transport.feed({buf.data(), *got});
      } catch (const ProtocolError& e) {
        spdlog::info("client {} protocol error: {}", c.id, e.what());
        if (c.transport.in_handshake()) {
          queue_direct([] {
            const std::string r = "HTTP/1.1 400 Bad Request\r\nConnection: close\r\nContent-Length: 0\r\n\r\n";
            return std::vector<std::uint8_t>(r.begin(), r.end());
          }());
          // Let the writer flush, then hang up.
          std::this_thread::sleep_for(std::chrono::milliseconds(50));
          c.alive = false;
          c.cv.notify_all();
          break;
        }
        c.ready = true;
        push(c, MessageType::status,
             shared_bytes(to_message(status(StatusState::error, e.what(), "malformed_frame"))), true);
        c.cv.notify_all();
        break;
      }
      queue_direct(std::move(out.reply));
      if (c.transport.kind() != TransportKind::undecided && !c.ready.exchange(true)) c.cv.notify_one();
      for (const auto& m : out.messages) handle(client, m);
      if (out.closed) break;
    }
  } catch (const NetworkError& e) {
    spdlog::debug("client {} receive failed: {}", c.id, e.what());
  }
  // Give a pending close-after message a chance to go out.
  {
    std::unique_lock lock(c.mutex);
    if (!c.closing) {
      lock.unlock();
      c.alive = false;
      c.cv.notify_all();
    }
  }
  c.reader_done = true;
}

void Session::handle(const std::shared_ptr<Client>& client, const Message& message) {
  if (message.type != MessageType::exo_request) {
    push(*client, MessageType::status,
         shared_bytes(to_message(status(StatusState::error,
                                        "clients may only send EXO_REQUEST, got " +
                                            std::string(type_name(message.type)),
                                        "unexpected_message"))));
    return;
  }
  ExoRequest request;
  try {
    request = parse_exo_request(message);
  } catch (const ProtocolError& e) {
    push(*client, MessageType::status, shared_bytes(to_message(status(StatusState::error, e.what(), "invalid_request"))));
    return;
  }
  serve_exo(client, request);
}

void Session::serve_exo(const std::shared_ptr<Client>& client, const ExoRequest& request) {
  const auto snap = buffer_.snapshot();
  if (snap.size() < 2) {
    push(*client, MessageType::status,
         shared_bytes(to_message(status(StatusState::warming_up, "need at least 2 buffered frames"))));
    return;
  }
  ExoResponse response;
  try {
    const auto t0 = Clock::now();
    const exo::ExoView view = exo::synthesize_exo(snap, request.f, cloud_, config_.intrinsics, config_.render);
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    double mean = 0.0;
    {
      std::lock_guard lock(report_mutex_);
      ++report_.exo_requests;
      latency_sum_ms_ += ms;
      mean = latency_sum_ms_ / static_cast<double>(report_.exo_requests);
    }
    response.f = request.f;
    response.clamped = view.clamped;
    response.reference_seq = view.reference_seq;
    response.current_seq = view.current_seq;
    response.latency_ms = ms;
    response.mean_latency_ms = mean;
    response.overlay_pixel_count = view.overlay_pixel_count;
    response.width = view.image.width();
    response.height = view.image.height();
    response.request_id = request.request_id;
    response.jpeg = imageio::encode_jpeg(view.image, config_.jpeg_quality);
    if (request.map_view) {
      const auto map = std::atomic_load(&map_);
      response.map_jpeg = imageio::encode_jpeg(exo::render_map_view(*map, *request.map_view, config_.intrinsics),
                                               config_.jpeg_quality);
    }
  } catch (const Error& e) {
    push(*client, MessageType::status, shared_bytes(to_message(status(StatusState::error, e.what(), "synthesis_failed"))));
    return;
  }
  push(*client, MessageType::exo_response, shared_bytes(to_message(response)));
}

void Session::ingest_loop() {
  const auto period = config_.rate_hz > 0.0 ? std::chrono::duration_cast<Clock::duration>(
                                                  std::chrono::duration<double>(1.0 / config_.rate_hz))
                                            : Clock::duration::zero();
  auto tick = Clock::now();
  std::uint64_t index = 0;
  std::string failure;
  try {
    while (!stopping_.load()) {
      auto event = source_->next();
      if (!event) break;
      const auto outcome = buffer_.offer(event->pose, event->image);
      auto map = std::atomic_load(&map_);
      if (outcome.admitted() || event->map_points) {
        const auto snap = buffer_.snapshot();
        if (const auto* newest = snap.current()) {
          std::span<const exo::MapFeature> features;
          if (event->map_points) features = *event->map_points;
          map = std::make_shared<const exo::MapSnapshot>(
              exo::update_map(*map, *newest, cloud_, config_.render, features));
          std::atomic_store(&map_, map);
        }
      }
      const std::size_t clients = client_count();
      {
        std::lock_guard lock(report_mutex_);
        report_.events.push_back({index, outcome.admitted(), outcome.seq, buffer_.size(), clients});
      }
      if (clients > 0) {
        EgoFrame ego;
        ego.seq = index;
        ego.pose = event->pose;
        ego.width = event->image->width();
        ego.height = event->image->height();
        ego.jpeg = imageio::encode_jpeg(*event->image, config_.jpeg_quality);
        broadcast(MessageType::ego_frame, encode(to_message(ego)));
        broadcast(MessageType::map_snapshot, encode(to_message(pack_map(*map, event->pose))));
      }
      ++index;
      if (period != Clock::duration::zero()) {
        tick += period;
        const auto now = Clock::now();
        // Late by more than a frame: resynchronise instead of bursting.
        if (tick < now - period) tick = now;
        std::this_thread::sleep_until(tick);
      }
    }
  } catch (const Error& e) {
    failure = e.what();
    spdlog::error("ingest stopped: {}", failure);
  }
  {
    std::lock_guard lock(report_mutex_);
    report_.frames_admitted = buffer_.total_admitted();
    if (!failure.empty()) {
      report_.final_state = "error";
      report_.error = failure;
    }
  }
  const Status final_status =
      failure.empty() ? status(StatusState::complete, std::to_string(index) + " events")
                      : status(StatusState::error, failure, "source_failed");
  broadcast(MessageType::status, encode(to_message(final_status)));
  spdlog::info("ingest finished after {} events, {} admitted", index, buffer_.total_admitted());
  ingest_done_ = true;
}

SessionReport Session::wait() {
  if (ingest_.joinable()) ingest_.join();
  const auto until = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(config_.linger_s));
  while (!stopping_.load() && Clock::now() < until) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  // Let queued STATUS complete messages reach connected clients.
  for (int i = 0; i < 50; ++i) {
    bool drained = true;
    {
      std::lock_guard lock(clients_mutex_);
      for (const auto& c : clients_) {
        std::lock_guard cl(c->mutex);
        if (c->alive.load() && c->ready.load() && !c->queue.empty()) drained = false;
      }
    }
    if (drained) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  stop();
  std::lock_guard lock(report_mutex_);
  SessionReport out = report_;
  out.mean_latency_ms = out.exo_requests ? latency_sum_ms_ / static_cast<double>(out.exo_requests) : 0.0;
  out.dropped_messages = dropped_.load();
  return out;
}

void Session::stop() {
  if (stopping_.exchange(true)) {
    if (ingest_.joinable() && ingest_.get_id() != std::this_thread::get_id()) ingest_.join();
    return;
  }
  if (ingest_.joinable()) ingest_.join();
  if (acceptor_.joinable()) acceptor_.join();
  reap_clients(true);
  listener_.close();
}

std::unique_ptr<sim::PoseSource> make_source(const SessionConfig& config) {
  if (const auto* r = std::get_if<ReplaySourceConfig>(&config.source)) {
    sim::ReplayOptions opts;
    opts.tolerance = r->tolerance;
    return std::make_unique<sim::ReplaySource>(r->trajectory, r->images, opts);
  }
  const auto& s = std::get<SimulateSourceConfig>(config.source);
  sim::SimulationParams p;
  p.kind = s.kind;
  p.steps = s.steps;
  p.landmarks = s.landmarks;
  p.scene_seed = s.seed;
  p.noise.sigma_t = s.sigma_t;
  p.noise.sigma_r = s.sigma_r;
  p.noise.seed = s.seed;
  p.intrinsics = config.intrinsics;
  return std::make_unique<sim::SimulatedSource>(p);
}

std::filesystem::path default_model_path() {
  const char* env = std::getenv("EGOEXO_DATA_DIR");
  const std::filesystem::path root = env && *env ? env : EGOEXO_DEFAULT_DATA_DIR;
  return root / "models" / "bluerov2.obj";
}

geom::Point3Set load_robot_cloud(const SessionConfig& config) {
  const auto path = config.model.empty() ? default_model_path() : config.model;
  const auto mesh = rov::load_mesh(path);
  const auto model = rov::sample_point_cloud(mesh.mesh, static_cast<long long>(config.points), config.sample_seed);
  rov::ModelMount mount;
  mount.scale = config.model_scale;
  return rov::mount_in_camera_frame(model, mount);
}

int run_session(const SessionConfig& config, SessionReport* report) {
  try {
    config.validate();
    Session session(config, make_source(config), load_robot_cloud(config));
    session.start();
    SessionReport r = session.wait();
    const int code = r.final_state == "complete" ? 0 : 1;
    if (report) *report = std::move(r);
    return code;
  } catch (const Error& e) {
    spdlog::error("session failed: {}", e.what());
    if (report) {
      report->final_state = "error";
      report->error = e.what();
    }
    return 1;
  }
}

}  // namespace egoexo::service
