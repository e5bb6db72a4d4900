#include "siamreid/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "siamreid/errors.hpp"

namespace siamreid {

void TrackerConfig::validate() const {
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tracker.score_threshold must lie in [0, 1]");
  }
  if (!(growth_factor > 1.0) || !std::isfinite(growth_factor)) {
    throw Error(ErrorCode::kInvalidArgument, "tracker.growth_factor must be > 1");
  }
  if (max_scale && !(*max_scale >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tracker.max_scale must be >= 1");
  }
  if (dictionary.capacity < 1 || dictionary.frame_gap < 1) {
    throw Error(ErrorCode::kInvalidArgument, "dictionary capacity and frame_gap must be >= 1");
  }
  association.validate();
}

Tracker::Tracker(TrackerConfig config, std::shared_ptr<CandidateProvider> provider,
                 std::shared_ptr<const Embedder> embedder)
    : config_(std::move(config)), provider_(std::move(provider)), embedder_(std::move(embedder)) {
  config_.validate();
  if (!provider_ || !embedder_) {
    throw Error(ErrorCode::kInvalidArgument, "tracker needs a provider and an embedder");
  }
}

FeatureVector Tracker::embed_candidate(const Candidate& candidate, const Frame& frame) const {
  if (candidate.feature) return *candidate.feature;
  if (candidate.latent) return embedder_->embed(*candidate.latent);
  if (const auto* image = std::get_if<RasterImage>(&frame.payload)) {
    return embedder_->embed(PixelPatch{image->crop(candidate.box)});
  }
  throw Error(ErrorCode::kMissingFeature, "no appearance source for candidate");
}

TrackerState Tracker::init(const Frame& frame, const BoundingBox& initial_box) {
  try {
    const BoundingBox box = clip_to_frame(initial_box, frame.dims);
    provider_->initialize(frame, box);

    // Prefer a proposal that already carries appearance (pre-computed
    // feature or simulator latent) and overlaps the initial box best.
    std::optional<FeatureVector> feature;
    const auto proposals = provider_->propose(frame, expand_region(box, 1.0, frame.dims));
    double best_iou = 0.0;
    for (const auto& c : proposals) {
      if (!c.feature && !c.latent) continue;
      const double overlap = iou(c.box, box);
      if (overlap > best_iou) {
        best_iou = overlap;
        feature = embed_candidate(c, frame);
      }
    }
    if (!feature) {
      const auto* image = std::get_if<RasterImage>(&frame.payload);
      if (image == nullptr) {
        throw Error(ErrorCode::kMissingFeature, "no appearance available for the initial box");
      }
      feature = embedder_->embed(PixelPatch{image->crop(box)});
    }
    if (!(feature->norm() > 0.0)) {
      throw Error(ErrorCode::kZeroVector, "initial feature is the zero vector");
    }

    TrackerState state{TrackerPhase::tracking(), box, TargetDictionary(config_.dictionary),
                       frame.index, 1.0};
    state.dictionary.maybe_insert(*feature, frame.index);
    return state;
  } catch (const Error& e) {
    throw Error(ErrorCode::kInitFailed, std::string("tracker init failed: ") + e.what());
  }
}

std::pair<TrackerState, FrameOutput> Tracker::step(const TrackerState& state,
                                                   const Frame& frame) const {
  if (frame.index <= state.frame_index) {
    throw StepFailed(frame.index, "frame index must increase (last was " +
                                      std::to_string(state.frame_index) + ")");
  }
  const bool tracking = !state.phase.is_lost();

  FrameOutput out;
  out.frame_index = frame.index;
  out.association_mode = state.phase.kind;

  std::vector<Candidate> survivors;
  AssociationResult result;
  try {
    out.region = expand_region(state.last_box, state.search_scale, frame.dims);
    const auto proposed = provider_->propose(frame, out.region);
    out.proposed = proposed.size();
    survivors = filter_by_score(proposed, config_.score_threshold);
    if (config_.association.use_appearance) {
      for (auto& c : survivors) {
        if (!c.feature) c.feature = embed_candidate(c, frame);
      }
    }
    const std::optional<Point> prev_center =
        tracking ? std::optional<Point>(state.last_box.center()) : std::nullopt;
    result = select(survivors, state.dictionary.representative(), prev_center,
                    config_.association);
  } catch (const StepFailed&) {
    throw;
  } catch (const Error& e) {
    throw StepFailed(frame.index, e.what());
  }

  TrackerState next = state;
  next.frame_index = frame.index;
  out.breakdown = std::move(result.breakdown);
  out.selected = result.selected;

  std::optional<BoundingBox> accepted_box;
  if (result.accepted) {
    try {
      accepted_box = clip_to_frame(survivors[*result.selected].box, frame.dims);
    } catch (const Error&) {
      accepted_box.reset();
    }
  }
  out.accepted = accepted_box.has_value();

  if (accepted_box) {
    next.phase = TrackerPhase::tracking();
    next.last_box = *accepted_box;
    next.search_scale = 1.0;
    if (const auto& f = survivors[*result.selected].feature) {
      next.dictionary.maybe_insert(*f, frame.index);
    }
    out.box = accepted_box;
  } else {
    next.phase = TrackerPhase::lost(state.phase.is_lost() ? state.phase.lost_duration + 1 : 1);
    double ceiling = saturation_scale(state.last_box, frame.dims);
    if (config_.max_scale) ceiling = std::min(ceiling, *config_.max_scale);
    next.search_scale =
        std::max(state.search_scale, std::min(state.search_scale * config_.growth_factor, ceiling));
    if (config_.hold_last_box) out.box = state.last_box;
  }
  out.phase = next.phase;
  out.search_scale = next.search_scale;
  return {std::move(next), std::move(out)};
}

std::vector<FrameOutput> run_sequence(const FrameSource& frames, const BoundingBox& initial_box,
                                      Tracker& tracker) {
  if (frames.size() == 0) throw Error(ErrorCode::kEmptyInput, "sequence has no frames");
  std::vector<FrameOutput> outputs;
  outputs.reserve(frames.size());

  const Frame first = frames.frame(0);
  TrackerState state = tracker.init(first, initial_box);
  FrameOutput head;
  head.frame_index = first.index;
  head.box = state.last_box;
  head.phase = state.phase;
  head.accepted = true;
  head.region = expand_region(state.last_box, 1.0, first.dims);
  outputs.push_back(std::move(head));

  for (std::size_t i = 1; i < frames.size(); ++i) {
    auto [next, output] = tracker.step(state, frames.frame(i));
    state = std::move(next);
    outputs.push_back(std::move(output));
  }
  return outputs;
}

}  // namespace siamreid
