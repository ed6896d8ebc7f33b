#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace cliffmul {

/// Fork-join worker pool. fork_join() schedules the left closure for
/// concurrent execution, runs the right closure on the calling thread, and
/// then joins the left one; a joining thread keeps running queued tasks
/// while it waits. With zero workers everything runs inline on the caller,
/// which makes the single-thread configuration an ordinary sequential run.
class task_pool {
 public:
  explicit task_pool(unsigned workers);
  ~task_pool();

  task_pool(const task_pool&) = delete;
  task_pool& operator=(const task_pool&) = delete;

  unsigned workers() const { return static_cast<unsigned>(threads_.size()); }

  template <class L, class R>
  void fork_join(L&& left, R&& right) {
    if (threads_.empty()) {
      left();
      right();
      return;
    }
    auto state = std::make_shared<fork_state>();
    enqueue({state, std::function<void()>(std::forward<L>(left))});
    right();
    join(*state);
  }

 private:
  struct fork_state {
    std::mutex m;
    std::condition_variable cv;
    bool done = false;
    std::exception_ptr error;
  };
  struct queued_task {
    std::shared_ptr<fork_state> state;
    std::function<void()> fn;
  };

  void enqueue(queued_task task);
  void join(fork_state& state);
  bool run_one();  // pops LIFO; false when the queue is empty
  void worker_loop();
  static void run_task(queued_task& task);

  std::mutex mu_;
  std::condition_variable work_cv_;
  std::deque<queued_task> queue_;
  bool stop_ = false;
  std::vector<std::thread> threads_;
};

}  // namespace cliffmul
