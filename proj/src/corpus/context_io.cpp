// Copyright 2026 The RelEmb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdio>
#include <sstream>
#include <string>

#include "../binary_io.hpp"
#include "relemb/corpus.hpp"

namespace relemb {
namespace {

constexpr char kContextMagic[] = "relemb-contexts";

std::uint64_t header_field(const std::string& header, std::string_view key) {
  const std::string needle = std::string(key) + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos) {
    throw FormatError("context header lacks '" + std::string(key) + "'");
  }
  return std::stoull(header.substr(pos + needle.size()));
}

}  // namespace

InMemoryContexts::InMemoryContexts(std::vector<NounPairContext> contexts)
    : contexts_(std::move(contexts)) {
  for (const auto& c : contexts_) targets_ += c.m_in();
}

bool InMemoryContexts::next(NounPairContext& out) {
  if (cursor_ >= contexts_.size()) return false;
  out = contexts_[cursor_++];
  return true;
}

ContextFileWriter::ContextFileWriter(const std::string& path, std::size_t m_out)
    : out_(path, std::ios::binary | std::ios::trunc), m_out_(m_out) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  write_header();
}

ContextFileWriter::~ContextFileWriter() {
  try {
    close();
  } catch (...) {
  }
}

void ContextFileWriter::write_header() {
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "%s v1 m_out=%010zu count=%020llu targets=%020llu\n",
                kContextMagic, m_out_, static_cast<unsigned long long>(count_),
                static_cast<unsigned long long>(targets_));
  out_ << buf;
}

void ContextFileWriter::write(const NounPairContext& context) {
  if (context.before.size() != m_out_ || context.after.size() != m_out_) {
    throw std::invalid_argument("context outside windows do not match m_out");
  }
  std::vector<std::uint32_t> rec;
  rec.reserve(3 + context.m_in() + 2 * m_out_);
  rec.push_back(context.n1);
  rec.push_back(context.n2);
  rec.push_back(static_cast<std::uint32_t>(context.m_in()));
  rec.insert(rec.end(), context.between.begin(), context.between.end());
  rec.insert(rec.end(), context.before.begin(), context.before.end());
  rec.insert(rec.end(), context.after.begin(), context.after.end());
  binary::write_u32s(out_, rec);
  ++count_;
  targets_ += context.m_in();
}

void ContextFileWriter::close() {
  if (closed_) return;
  closed_ = true;
  out_.seekp(0);
  write_header();
  out_.close();
  if (out_.fail()) throw std::runtime_error("failed writing context file");
}

ContextFileReader::ContextFileReader(const std::string& path)
    : in_(path, std::ios::binary) {
  if (!in_) throw std::runtime_error("cannot open " + path);
  std::string header;
  std::getline(in_, header);
  if (header.rfind(std::string(kContextMagic) + " v1 ", 0) != 0) {
    throw FormatError("not a relemb-contexts v1 file: " + path);
  }
  m_out_ = header_field(header, "m_out");
  count_ = header_field(header, "count");
  targets_ = header_field(header, "targets");
  data_start_ = in_.tellg();
}

void ContextFileReader::rewind() {
  in_.clear();
  in_.seekg(data_start_);
  read_ = 0;
}

bool ContextFileReader::next(NounPairContext& out) {
  if (read_ >= count_) return false;
  std::uint32_t head[3];
  if (!binary::read_u32s(in_, head)) throw FormatError("context file truncated");
  out.n1 = head[0];
  out.n2 = head[1];
  out.between.resize(head[2]);
  out.before.resize(m_out_);
  out.after.resize(m_out_);
  if (!binary::read_u32s(in_, out.between) || !binary::read_u32s(in_, out.before) ||
      !binary::read_u32s(in_, out.after)) {
    throw FormatError("context file truncated");
  }
  out.sentence_ref = kNoSentence;
  ++read_;
  return true;
}

}  // namespace relemb
