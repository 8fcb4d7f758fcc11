#ifndef ICI_MODEL_H
#define ICI_MODEL_H

#include "ici/likelihood.h"
#include "ici/types.h"

#include <cstddef>
#include <span>
#include <vector>

namespace ici
{

/// Indices of the contexts that contain u.
std::vector<std::size_t> shared_contexts(std::span<const Context> contexts, UserId u);

/**
 * Indices of every context with maximal overlap |C & (receivers | tagged)|.
 * Ties are all returned. When the best overlap is 0 every context is returned.
 */
std::vector<std::size_t> message_context(const Message& msg, std::span<const Context> contexts);

/// Combined appropriateness of topics within a context, excluding the store owner. Vacuous contexts give 1.
double context_appropriateness(const LikelihoodStore& store, const Context& context, std::span<const TopicId> topics,
                               CombineFn combine = harmonic_mean);

/// Lowest context appropriateness over the message's contexts; 1 if there are no contexts.
double message_appropriateness(const LikelihoodStore& store, const Message& msg, std::span<const Context> contexts,
                               CombineFn combine = harmonic_mean);

/// Combined knowledge of subject's association with the topics among context members other than subject and owner.
double context_knowledge(const LikelihoodStore& store, const Context& context, UserId subject,
                         std::span<const TopicId> topics, CombineFn combine = harmonic_mean);

/**
 * Lowest context knowledge over every tagged user s, receiver r and context
 * shared by s and r. 1 when no such triple exists.
 */
double message_knowledge(const LikelihoodStore& store, const Message& msg, std::span<const Context> contexts,
                         CombineFn combine = harmonic_mean);

} // namespace ici

#endif
