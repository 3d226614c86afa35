#pragma once

#include <cstddef>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <string>

namespace crx {

// Final read/write counters for the three registers of a weaving run.
// Nonreactive processes show X.reads == 0 by construction; the serialized
// block is the `crx audit` output and the golden-audit format.
struct RegisterAudit {
  long long c_reads = 0;
  long long c_writes = 0;
  long long r_reads = 0;
  long long r_writes = 0;
  long long x_reads = 0;
  long long x_writes = 0;

  std::string to_text() const {
    std::ostringstream out;
    out << "C.reads=" << c_reads << "\n"
        << "C.writes=" << c_writes << "\n"
        << "R.reads=" << r_reads << "\n"
        << "R.writes=" << r_writes << "\n"
        << "X.reads=" << x_reads << "\n"
        << "X.writes=" << x_writes << "\n";
    return out.str();
  }
};

inline bool operator==(const RegisterAudit& a, const RegisterAudit& b) {
  return a.c_reads == b.c_reads && a.c_writes == b.c_writes && a.r_reads == b.r_reads &&
         a.r_writes == b.r_writes && a.x_reads == b.x_reads && a.x_writes == b.x_writes;
}

// Append-only element store with counted access. Elements are committed
// once and never mutated or removed; every element retrieval counts as one
// read, every commit as one write. The store grows monotonically.
template <class Elem>
class Register {
 public:
  void commit(Elem e) {
    store_.push_back(std::move(e));
    ++writes_;
  }

  const Elem& read(size_t i) {
    if (i >= store_.size()) throw std::out_of_range("register index");
    ++reads_;
    return store_[i];
  }

  const Elem& most_recent() {
    if (store_.empty()) throw std::out_of_range("register is empty");
    ++reads_;
    return store_.back();
  }

  size_t size() const { return store_.size(); }
  long long reads() const { return reads_; }
  long long writes() const { return writes_; }

  // Process-boundary extraction of the finished store; not a counted read.
  std::deque<Elem> drain() && { return std::move(store_); }
  const std::deque<Elem>& peek_store() const { return store_; }

 private:
  std::deque<Elem> store_;
  long long reads_ = 0;
  long long writes_ = 0;
};

}  // namespace crx
