#include <gtest/gtest.h>

#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "support.hpp"
#include "xdalign/embedding.hpp"
#include "xdalign/error.hpp"
#include "xdalign/vector_store.hpp"

using namespace xdalign;

namespace {

// Returns a vector whose first entry encodes the text length, so tests can
// tell rows apart after normalization.
class FakeBackend : public EmbeddingBackend {
 public:
  std::size_t dim = 4;
  std::optional<std::size_t> zero_at;           // global text index returning all zeros
  std::optional<std::size_t> short_at;          // global text index returning dim - 1 entries
  std::optional<std::size_t> drop_from_batch;   // batch whose reply is one vector short
  std::vector<std::size_t> batch_sizes;
  std::mutex mutex;

  std::vector<std::vector<float>> encode(std::span<const TextUnit> batch) override {
    std::size_t batch_no;
    {
      std::lock_guard lock(mutex);
      batch_no = batch_sizes.size();
      batch_sizes.push_back(batch.size());
    }
    std::vector<std::vector<float>> out;
    for (const auto& u : batch) {
      const std::size_t index = std::stoul(u.id.substr(1));
      std::vector<float> v(dim, 1.0f);
      v[0] = static_cast<float>(index + 1);
      if (zero_at == index) std::fill(v.begin(), v.end(), 0.0f);
      if (short_at == index) v.pop_back();
      out.push_back(v);
    }
    if (drop_from_batch == batch_no) out.pop_back();
    return out;
  }
};

std::vector<TextUnit> units(std::size_t n) {
  std::vector<TextUnit> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"t" + std::to_string(i), "text " + std::to_string(i)});
  return out;
}

double norm(std::span<const float> v) {
  double s = 0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

Document titled(std::string title, std::string lead) {
  return Document{"x", "de", "2021-11-13", std::move(title), std::move(lead), "", nullptr};
}

}  // namespace

TEST(AlignmentText, JoinsTitleAndLead) {
  EXPECT_EQ(build_alignment_text(titled("A", "B")), "A B");
  EXPECT_EQ(build_alignment_text(titled("T", "")), "T");
  EXPECT_EQ(build_alignment_text(titled("", " L ")), "L");
  EXPECT_THROW(build_alignment_text(titled(" ", "")), ValidationError);
}

TEST(AlignmentText, TrimsRealHeadline) {
  EXPECT_EQ(build_alignment_text(titled(" Mobilität.: «Ab 2030 bieten wir nur noch vollelektrische Fahrzeuge an» ",
                                        " Die Elektro-Revolution rollt. ")),
            "Mobilität.: «Ab 2030 bieten wir nur noch vollelektrische Fahrzeuge an» Die Elektro-Revolution rollt.");
}

TEST(EmbeddingMatrix, EnforcesInvariants) {
  EXPECT_THROW(EmbeddingMatrix({"a"}, 2, {1.0f}), IntegrityError);
  EXPECT_THROW(EmbeddingMatrix({"a", "a"}, 1, {1.0f, 1.0f}), IntegrityError);
  EXPECT_THROW(EmbeddingMatrix({"a"}, 2, {1.0f, 1.0f}), NormalizationError);
  const EmbeddingMatrix m({"a"}, 2, {0.6f, 0.8f});
  EXPECT_EQ(m.index_of("a"), 0u);
  EXPECT_FALSE(m.index_of("b"));
  EXPECT_THROW(m.vector_for("b"), MissingVectorError);
}

TEST(EmbedTexts, ShapeAndUnitNorm) {
  FakeBackend backend;
  const auto u = units(3);
  const auto m = embed_texts(u, backend, 32);
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.dim(), 4u);
  for (std::size_t i = 0; i < m.rows(); ++i) EXPECT_NEAR(norm(m.row(i)), 1.0, 1e-6);
  EXPECT_EQ(m.ids()[2], "t2");
}

TEST(EmbedTexts, DimensionMismatchIsIntegrityError) {
  FakeBackend backend;
  backend.short_at = 1;
  const auto u = units(3);
  try {
    embed_texts(u, backend, 32);
    FAIL() << "expected IntegrityError";
  } catch (const IntegrityError& e) {
    EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos) << e.what();
  }
}

TEST(EmbedTexts, ZeroVectorNamesIndex) {
  FakeBackend backend;
  backend.zero_at = 2;
  const auto u = units(4);
  try {
    embed_texts(u, backend, 32);
    FAIL() << "expected NormalizationError";
  } catch (const NormalizationError& e) {
    EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos) << e.what();
  }
}

TEST(EmbedTexts, ShortReplyIsIntegrityError) {
  FakeBackend backend;
  backend.drop_from_batch = 1;
  const auto u = units(5);
  EXPECT_THROW(embed_texts(u, backend, 2), IntegrityError);
}

TEST(EmbedTexts, BatchingPreservesOrderForAnyConcurrency) {
  const auto u = units(23);
  FakeBackend reference_backend;
  const auto reference = embed_texts(u, reference_backend, 23);
  for (std::size_t batch : {1u, 2u, 5u, 7u, 32u}) {
    for (std::size_t inflight : {1u, 3u, 8u}) {
      FakeBackend backend;
      const auto m = embed_texts(u, backend, batch, inflight);
      EXPECT_EQ(m, reference) << "batch " << batch << " inflight " << inflight;
      for (std::size_t s : backend.batch_sizes) EXPECT_LE(s, batch);
      EXPECT_EQ(backend.batch_sizes.size(), (u.size() + batch - 1) / batch);
    }
  }
}

TEST(EmbedTexts, RejectsEmptyInputAndZeroBatch) {
  FakeBackend backend;
  EXPECT_THROW(embed_texts({}, backend, 4), ValidationError);
  const auto u = units(1);
  EXPECT_THROW(embed_texts(u, backend, 0), ValidationError);
}

TEST(FileBackend, LooksUpByUnitId) {
  testing_support::TempDir dir;
  save_vectors(EmbeddingMatrix({"a", "b"}, 2, {1.0f, 0.0f, 0.0f, 1.0f}), dir / "v.xdemb");
  ProviderConfig config;
  config.vectors_path = dir / "v.xdemb";
  const std::vector<TextUnit> u = {{"b", "ignored"}, {"a", "ignored"}};
  const auto m = embed_texts(u, config);
  EXPECT_EQ(m.row(0)[1], 1.0f);
  EXPECT_EQ(m.row(1)[0], 1.0f);
  const std::vector<TextUnit> missing = {{"zz", ""}};
  EXPECT_THROW(embed_texts(missing, config), MissingVectorError);
}

TEST(ProviderConfig, Validates) {
  ProviderConfig remote;
  remote.mode = ProviderMode::Remote;
  EXPECT_THROW(remote.validate(), ValidationError);
  remote.endpoint = "http://127.0.0.1:1";
  EXPECT_NO_THROW(remote.validate());
  remote.batch_size = 0;
  EXPECT_THROW(remote.validate(), ValidationError);
  EXPECT_EQ(parse_provider_mode("remote"), ProviderMode::Remote);
  EXPECT_THROW(parse_provider_mode("grpc"), ValidationError);
}

class RemoteBackendTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/embed", [this](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(mutex_);
        auth_headers_.push_back(req.get_header_value("Authorization"));
      }
      if (status_ != 200) {
        res.status = status_;
        res.set_content(std::string(500, 'x'), "text/plain");
        return;
      }
      const auto body = nlohmann::json::parse(req.body);
      {
        std::lock_guard lock(mutex_);
        models_.push_back(body["model"]);
        batch_sizes_.push_back(body["texts"].size());
      }
      nlohmann::json vectors = nlohmann::json::array();
      for (const auto& t : body["texts"]) {
        const auto s = t.get<std::string>();
        vectors.push_back({static_cast<double>(s.size()), 1.0, 0.5});
      }
      res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  ProviderConfig config() const {
    ProviderConfig c;
    c.mode = ProviderMode::Remote;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/";
    c.model_name = "paraphrase-test";
    c.batch_size = 3;
    c.timeout_seconds = 5;
    return c;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  int status_ = 200;
  std::mutex mutex_;
  std::vector<std::string> auth_headers_;
  std::vector<std::string> models_;
  std::vector<std::size_t> batch_sizes_;
};

TEST_F(RemoteBackendTest, BatchesAndKeepsOrder) {
  std::vector<TextUnit> u;
  for (int i = 0; i < 10; ++i) u.push_back({"u" + std::to_string(i), std::string(static_cast<std::size_t>(i + 1), 'a')});
  auto c = config();
  c.max_in_flight = 2;
  const auto m = embed_texts(u, c);
  ASSERT_EQ(m.rows(), 10u);
  EXPECT_EQ(batch_sizes_.size(), 4u);
  for (auto s : batch_sizes_) EXPECT_LE(s, 3u);
  for (std::size_t i = 0; i < 10; ++i) {
    const double len = static_cast<double>(i + 1);
    EXPECT_NEAR(m.row(i)[0], len / std::sqrt(len * len + 1.25), 1e-6) << i;
  }
  EXPECT_EQ(models_.front(), "paraphrase-test");
  EXPECT_EQ(auth_headers_.front(), "");
}

TEST_F(RemoteBackendTest, SendsBearerToken) {
  ::setenv("XDALIGN_TEST_TOKEN", "s3cret", 1);
  auto c = config();
  c.auth_token_env = "XDALIGN_TEST_TOKEN";
  const std::vector<TextUnit> u = {{"a", "hello"}};
  embed_texts(u, c);
  ASSERT_EQ(auth_headers_.size(), 1u);
  EXPECT_EQ(auth_headers_[0], "Bearer s3cret");
  c.auth_token_env = "XDALIGN_TEST_TOKEN_UNSET";
  EXPECT_THROW(RemoteBackend{c}, ProviderError);
}

TEST_F(RemoteBackendTest, ErrorStatusIsProviderErrorWithExcerpt) {
  status_ = 503;
  const std::vector<TextUnit> u = {{"a", "hello"}};
  try {
    embed_texts(u, config());
    FAIL() << "expected ProviderError";
  } catch (const ProviderError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("503"), std::string::npos) << msg;
    EXPECT_LT(msg.size(), 300u);
  }
}

TEST(RemoteBackend, UnreachableEndpointIsProviderError) {
  ProviderConfig c;
  c.mode = ProviderMode::Remote;
  c.endpoint = "http://127.0.0.1:1";
  c.timeout_seconds = 2;
  const std::vector<TextUnit> u = {{"a", "hello"}};
  EXPECT_THROW(embed_texts(u, c), ProviderError);
}
