#include "cliffmul/task_pool.hpp"

namespace cliffmul {

task_pool::task_pool(unsigned workers) {
  threads_.reserve(workers);
  for (unsigned i = 0; i < workers; ++i)
    threads_.emplace_back([this] { worker_loop(); });
}

task_pool::~task_pool() {
  {
    std::lock_guard<std::mutex> lk(mu_);
    stop_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void task_pool::enqueue(queued_task task) {
  {
    std::lock_guard<std::mutex> lk(mu_);
    queue_.push_back(std::move(task));
  }
  work_cv_.notify_one();
}

void task_pool::run_task(queued_task& task) {
  try {
    task.fn();
  } catch (...) {
    task.state->error = std::current_exception();
  }
  {
    std::lock_guard<std::mutex> lk(task.state->m);
    task.state->done = true;
  }
  task.state->cv.notify_all();
}

bool task_pool::run_one() {
  queued_task task;
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (queue_.empty()) return false;
    task = std::move(queue_.back());
    queue_.pop_back();
  }
  run_task(task);
  return true;
}

void task_pool::join(fork_state& state) {
  for (;;) {
    {
      std::lock_guard<std::mutex> lk(state.m);
      if (state.done) break;
    }
    if (run_one()) continue;
    // Queue drained: the forked task is running on another thread.
    std::unique_lock<std::mutex> lk(state.m);
    state.cv.wait(lk, [&] { return state.done; });
    break;
  }
  if (state.error) std::rethrow_exception(state.error);
}

void task_pool::worker_loop() {
  for (;;) {
    queued_task task;
    {
      std::unique_lock<std::mutex> lk(mu_);
      work_cv_.wait(lk, [&] { return stop_ || !queue_.empty(); });
      if (queue_.empty()) return;  // stop requested and nothing left
      task = std::move(queue_.front());
      queue_.pop_front();
    }
    run_task(task);
  }
}

}  // namespace cliffmul
