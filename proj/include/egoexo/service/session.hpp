#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "egoexo/buffer/pose_buffer.hpp"
#include "egoexo/exo/map.hpp"
#include "egoexo/geom/point_set.hpp"
#include "egoexo/service/config.hpp"
#include "egoexo/service/messages.hpp"
#include "egoexo/service/socket.hpp"
#include "egoexo/sim/source.hpp"

namespace egoexo::service {

/// One ingest step as recorded in the session log.
struct SessionEvent {
  std::uint64_t index = 0;
  bool admitted = false;
  std::optional<std::uint64_t> seq;
  std::size_t buffer_size = 0;
  std::size_t clients = 0;
};

struct SessionReport {
  std::vector<SessionEvent> events;
  std::uint64_t frames_admitted = 0;
  std::uint64_t exo_requests = 0;
  double mean_latency_ms = 0.0;
  /// EGO_FRAME/MAP_SNAPSHOT messages dropped by full client queues.
  std::uint64_t dropped_messages = 0;
  std::uint64_t connections = 0;
  /// "complete", or "error" with `error` set.
  std::string final_state = "complete";
  std::string error;
};

/// Per-client send queue cap; beyond it the oldest droppable message goes.
inline constexpr std::size_t kClientQueueCap = 32;

struct QueuedMessage {
  MessageType type = MessageType::status;
  std::shared_ptr<const std::vector<std::uint8_t>> bytes;
  /// Close the connection once this message is written.
  bool close_after = false;
};

/// Appends `message`; when the queue already holds `cap` entries the oldest
/// EGO_FRAME or MAP_SNAPSHOT is dropped first. Other types are never
/// dropped, so a queue of only those may exceed the cap. Returns the number
/// of messages dropped (0 or 1).
std::size_t enqueue_bounded(std::deque<QueuedMessage>& queue, QueuedMessage message,
                            std::size_t cap = kClientQueueCap);

/// Session host: one ingest thread, one acceptor, a reader and a writer
/// thread per client. EXO_REQUESTs are served on the requesting client's
/// reader thread from an immutable buffer snapshot.
class Session {
 public:
  /// `cloud` is the robot point cloud in camera coordinates.
  Session(SessionConfig config, std::unique_ptr<sim::PoseSource> source, geom::Point3Set cloud);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Binds the listener and starts ingest. Throws NetworkError on bind failure.
  void start();
  std::uint16_t port() const noexcept { return port_; }

  /// Blocks until the source is exhausted and the linger time has passed,
  /// then shuts down and returns the log.
  SessionReport wait();
  /// Stops early; safe from any thread and idempotent.
  void stop();

  bool ingest_finished() const noexcept { return ingest_done_.load(); }
  buffer::BufferSnapshot snapshot() const { return buffer_.snapshot(); }
  std::size_t client_count() const;

 private:
  struct Client;

  SessionConfig config_;
  std::unique_ptr<sim::PoseSource> source_;
  geom::Point3Set cloud_;
  buffer::PoseBuffer buffer_;
  std::shared_ptr<const exo::MapSnapshot> map_;

  Socket listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<bool> ingest_done_{false};
  std::atomic<bool> started_{false};
  std::thread acceptor_;
  std::thread ingest_;

  mutable std::mutex clients_mutex_;
  std::list<std::shared_ptr<Client>> clients_;

  std::mutex report_mutex_;
  SessionReport report_;
  double latency_sum_ms_ = 0.0;
  std::atomic<std::uint64_t> dropped_{0};

  void accept_loop();
  void ingest_loop();
  void reader_loop(const std::shared_ptr<Client>& client);
  void writer_loop(const std::shared_ptr<Client>& client);
  void handle(const std::shared_ptr<Client>& client, const Message& message);
  void serve_exo(const std::shared_ptr<Client>& client, const ExoRequest& request);
  void broadcast(MessageType type, std::vector<std::uint8_t> encoded);
  void push(Client& client, MessageType type, std::shared_ptr<const std::vector<std::uint8_t>> bytes,
            bool close_after = false);
  void reap_clients(bool all);
  Status status(StatusState state, std::string detail = {}, std::string code = {}) const;
  ConfigMessage config_message() const;
};

/// Pose source described by the config.
std::unique_ptr<sim::PoseSource> make_source(const SessionConfig& config);

/// Bundled models directory: $EGOEXO_DATA_DIR/models when set, else the
/// build-time data directory.
std::filesystem::path default_model_path();

/// Loads the model, samples `config.points` points and mounts them in the
/// camera frame at `config.model_scale`.
geom::Point3Set load_robot_cloud(const SessionConfig& config);

/// Builds source and cloud, serves until the source is exhausted, and
/// returns a process exit status (0 complete, 1 error). The log is copied
/// into `report` when given.
int run_session(const SessionConfig& config, SessionReport* report = nullptr);

}  // namespace egoexo::service
