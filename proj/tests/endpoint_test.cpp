#include <doctest.h>

#include <cstdlib>

#include "claw/ctl/endpoint.hpp"
#include "support/mock_server.hpp"

using claw::ctl::ChatRequest;
using claw::ctl::EndpointError;
using claw::ctl::EndpointSpec;

namespace {

EndpointSpec spec_for(const mock::ChatServer& server) {
  EndpointSpec spec;
  spec.base_url = server.base_url();
  spec.timeout_ms = 2000;
  spec.retries = 3;
  spec.backoff_ms = 1;
  return spec;
}

ChatRequest sample_request() {
  ChatRequest req;
  req.model = "mock-model";
  req.messages = {{"system", "you are a grounding model"}, {"user", "locate the button"}};
  req.temperature = 0.2;
  return req;
}

}  // namespace

TEST_CASE("endpoint echoes the scripted completion") {
  mock::ChatServer server;
  server.reply = [](const nlohmann::json& body) {
    return body.at("model").get<std::string>() + ":" +
           body.at("messages").back().at("content").get<std::string>();
  };
  server.start();

  auto res = claw::ctl::endpoint_call(spec_for(server), sample_request());
  CHECK(res.content == "mock-model:locate the button");
  CHECK(res.status == 200);
  CHECK(res.attempts == 1);
  CHECK(server.requests.load() == 1);
}

TEST_CASE("transient server errors are retried with success recorded") {
  mock::ChatServer server;
  server.fail_first = 2;
  server.start();

  auto res = claw::ctl::endpoint_call(spec_for(server), sample_request());
  CHECK(res.attempts == 3);
  CHECK(res.content == "ok");
  CHECK(server.requests.load() == 3);
}

TEST_CASE("persistent failure exhausts the retry budget") {
  mock::ChatServer server;
  server.fail_first = 100;
  server.start();

  auto spec = spec_for(server);
  spec.retries = 2;
  CHECK_THROWS_AS(claw::ctl::endpoint_call(spec, sample_request()), EndpointError);
  CHECK(server.requests.load() == 3);
}

TEST_CASE("client errors do not retry") {
  mock::HttpFixture server;  // no completion route registered -> 404
  server.start();
  EndpointSpec spec;
  spec.base_url = server.base_url();
  spec.retries = 5;
  spec.backoff_ms = 1;
  CHECK_THROWS_AS(claw::ctl::endpoint_call(spec, sample_request()), EndpointError);
}

TEST_CASE("unreachable endpoints fail after bounded transport retries") {
  EndpointSpec spec;
  spec.base_url = "http://127.0.0.1:9";  // discard port, nothing listens
  spec.timeout_ms = 100;
  spec.retries = 1;
  spec.backoff_ms = 1;
  CHECK_THROWS_AS(claw::ctl::endpoint_call(spec, sample_request()), EndpointError);
}

TEST_CASE("bearer token comes from the named environment variable") {
  mock::ChatServer server;
  server.start();
  setenv("CLAW_TEST_TOKEN", "sesame", 1);
  auto spec = spec_for(server);
  spec.auth_env = "CLAW_TEST_TOKEN";
  claw::ctl::endpoint_call(spec, sample_request());
  server.stop();
  CHECK(server.last_auth == "Bearer sesame");
}

TEST_CASE("endpoint specs validate their bounds") {
  EndpointSpec spec;
  spec.base_url = "http://x";
  spec.timeout_ms = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.timeout_ms = 10;
  spec.retries = -1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.retries = 0;
  CHECK_NOTHROW(spec.validate());
  spec.base_url.clear();
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("structured message parts replace the plain content string") {
  mock::ChatServer server;
  nlohmann::json seen;
  server.reply = [&](const nlohmann::json& body) {
    seen = body.at("messages").at(0).at("content");
    return std::string("ok");
  };
  server.start();

  ChatRequest req;
  req.model = "mock-model";
  claw::ctl::ChatMessage msg;
  msg.role = "user";
  msg.parts = nlohmann::json::array(
      {{{"type", "image_url"}, {"image_url", {{"url", "data:application/json;base64,e30="}}}},
       {{"type", "text"}, {"text", "locate the button"}}});
  req.messages.push_back(msg);
  claw::ctl::endpoint_call(spec_for(server), req);

  REQUIRE(seen.is_array());
  CHECK(seen.size() == 2);
  CHECK(seen.at(0).at("type") == "image_url");
  CHECK(seen.at(1).at("text") == "locate the button");
}
