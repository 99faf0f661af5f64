/* rovernet: feed-forward networks trained by momentum back-propagation,
 * plus a deterministic 2D rover path-planning simulator driven by such a
 * network.
 *
 * Every function returns rvn_status; RVN_OK means success. On failure a
 * human-readable message is available from rvn_last_error() until the next
 * failing call on the same thread. Objects returned through out-parameters
 * are owned by the caller and released with the matching *_free function.
 */

#ifndef ROVERNET_H
#define ROVERNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RVN_API __declspec(dllexport)
#else
#define RVN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rvn_status {
  RVN_OK = 0,
  RVN_ERROR_INVALID_ARGUMENT = 1,
  RVN_ERROR_SHAPE_MISMATCH = 2,
  RVN_ERROR_IO = 3,
  RVN_ERROR_PARSE = 4,
  RVN_ERROR_NONFINITE = 5,
  RVN_ERROR_INTERNAL = 6
} rvn_status;

/* How one back-propagation step orders its weight updates.
 * RVN_UPDATE_SEQUENTIAL updates the output matrix in place first, so the
 * hidden-layer updates read the already-updated output weights.
 * RVN_UPDATE_SIMULTANEOUS derives every update from the pre-step weights
 * (plain gradient descent; the mode gradient checking assumes). */
typedef enum rvn_update_mode {
  RVN_UPDATE_SEQUENTIAL = 0,
  RVN_UPDATE_SIMULTANEOUS = 1
} rvn_update_mode;

typedef enum rvn_outcome {
  RVN_OUTCOME_REACHED_GOAL = 0,
  RVN_OUTCOME_COLLISION = 1,
  RVN_OUTCOME_TIMEOUT = 2
} rvn_outcome;

typedef struct rvn_network rvn_network;     /* a feed-forward network */
typedef struct rvn_delta rvn_delta;         /* previous-step weight changes */
typedef struct rvn_dataset rvn_dataset;     /* ordered training patterns */
typedef struct rvn_trace rvn_trace;         /* one forward pass, layer by layer */
typedef struct rvn_world rvn_world;         /* obstacles, start pose, goal */
typedef struct rvn_trajectory rvn_trajectory; /* recorded simulation run */

/* Stable name of a status code, e.g. "RVN_ERROR_PARSE". */
RVN_API const char* rvn_status_name(rvn_status status);

/* Message describing this thread's most recent failure; never NULL. */
RVN_API const char* rvn_last_error(void);

/* ---- networks -------------------------------------------------------- */

/* Creates a network with all weights zero. layer_sizes lists neurons per
 * layer (at least two layers, each of at least one neuron); hidden layers
 * use the sigmoid activation and the output layer is linear. bias_input is
 * the constant fed to every bias weight, +1 in the usual configuration. */
RVN_API rvn_status rvn_network_create(const size_t* layer_sizes,
                                      size_t n_layers, double bias_input,
                                      rvn_network** out);

/* As rvn_network_create, but every weight is drawn uniformly from [0, 1)
 * using a deterministic generator seeded with seed. */
RVN_API rvn_status rvn_network_create_random(const size_t* layer_sizes,
                                             size_t n_layers, uint64_t seed,
                                             double bias_input,
                                             rvn_network** out);

RVN_API rvn_status rvn_network_clone(const rvn_network* net,
                                     rvn_network** out);

RVN_API void rvn_network_free(rvn_network* net);

/* JSON persistence. Saving writes numbers with 17 significant digits, so a
 * load of the saved file reproduces the network bit-exactly. */
RVN_API rvn_status rvn_network_save(const rvn_network* net, const char* path);
RVN_API rvn_status rvn_network_load(const char* path, rvn_network** out);

RVN_API rvn_status rvn_network_layer_count(const rvn_network* net,
                                           size_t* out);
RVN_API rvn_status rvn_network_layer_size(const rvn_network* net,
                                          size_t layer, size_t* out);

/* Weights are addressed by (transition, row, col): transition t maps layer
 * t to layer t+1, row is the destination neuron, and col is the source
 * neuron, with col == layer_size(t) addressing the bias weight. */
RVN_API rvn_status rvn_network_get_weight(const rvn_network* net,
                                          size_t transition, size_t row,
                                          size_t col, double* out);
RVN_API rvn_status rvn_network_set_weight(rvn_network* net, size_t transition,
                                          size_t row, size_t col,
                                          double value);

/* Runs a forward pass. input holds n_input values and output receives
 * n_output values; both counts must match the topology exactly. */
RVN_API rvn_status rvn_network_forward(const rvn_network* net,
                                       const double* input, size_t n_input,
                                       double* output, size_t n_output);

/* ---- forward traces --------------------------------------------------- */

/* Captures the per-neuron pre-activation sums and activations of one
 * forward pass. layer 0 is the first layer after the inputs; the last
 * layer (rvn_network_layer_count - 2) is the output layer. */
RVN_API rvn_status rvn_trace_run(const rvn_network* net, const double* input,
                                 size_t n_input, rvn_trace** out);
RVN_API rvn_status rvn_trace_net_input(const rvn_trace* trace, size_t layer,
                                       size_t neuron, double* out);
RVN_API rvn_status rvn_trace_activation(const rvn_trace* trace, size_t layer,
                                        size_t neuron, double* out);
RVN_API void rvn_trace_free(rvn_trace* trace);

/* ---- training --------------------------------------------------------- */

/* Delta objects carry the previous step's weight changes between calls;
 * the momentum term multiplies them. A fresh delta is all zeros. */
RVN_API rvn_status rvn_delta_create(const rvn_network* net, rvn_delta** out);
RVN_API rvn_status rvn_delta_reset(rvn_delta* delta);
RVN_API void rvn_delta_free(rvn_delta* delta);

/* One supervised update: forward pass, output errors (desired - actual),
 * then both weight-update cases in the order the mode prescribes. errors
 * may be NULL or a buffer of n_desired values receiving the output errors
 * measured before the update. delta must have been created for a network
 * of this shape and is updated in place. */
RVN_API rvn_status rvn_backprop_step(rvn_network* net, rvn_delta* delta,
                                     const double* input, size_t n_input,
                                     const double* desired, size_t n_desired,
                                     double learning_rate, double momentum,
                                     rvn_update_mode mode, double* errors);

/* Loads a dataset from CSV with header in0,..,out0,.. (one pattern per
 * row), or builds one from row-major arrays: inputs is n_patterns*n_input
 * values, outputs is n_patterns*n_output values. */
RVN_API rvn_status rvn_dataset_load_csv(const char* path, rvn_dataset** out);
RVN_API rvn_status rvn_dataset_create(const double* inputs, size_t n_input,
                                      const double* outputs, size_t n_output,
                                      size_t n_patterns, rvn_dataset** out);
RVN_API rvn_status rvn_dataset_size(const rvn_dataset* data, size_t* out);

/* Input and output vector lengths shared by every pattern. */
RVN_API rvn_status rvn_dataset_dims(const rvn_dataset* data, size_t* n_input,
                                    size_t* n_output);
RVN_API void rvn_dataset_free(rvn_dataset* data);

typedef struct rvn_training_config {
  double learning_rate;   /* > 0, default 0.25 */
  double momentum;        /* >= 0, default 0 */
  double error_threshold; /* > 0, default 0.01 */
  uint64_t max_epochs;    /* default 10000; 0 evaluates without training */
  rvn_update_mode mode;   /* default RVN_UPDATE_SEQUENTIAL */
} rvn_training_config;

/* Fills cfg with the defaults listed above. */
RVN_API void rvn_training_config_init(rvn_training_config* cfg);

typedef struct rvn_training_summary {
  int converged;              /* 1 iff every pattern ended within threshold */
  uint64_t epochs_run;
  double final_max_abs_error; /* re-test over all patterns, final weights */
} rvn_training_summary;

/* Called after each epoch with the 1-based epoch index and the epoch-end
 * re-test error over all patterns. */
typedef void (*rvn_epoch_callback)(uint64_t epoch_index,
                                   double epoch_max_abs_error,
                                   void* user_data);

/* Trains net in place: each epoch sweeps the dataset in order, updating on
 * a pattern only when its max-abs output error exceeds the threshold, and
 * stops once the epoch-end re-test is within the threshold or max_epochs is
 * exhausted. Non-convergence is reported through the summary, not as an
 * error. on_epoch and summary may be NULL. */
RVN_API rvn_status rvn_train(rvn_network* net, const rvn_dataset* data,
                             const rvn_training_config* cfg,
                             rvn_epoch_callback on_epoch, void* user_data,
                             rvn_training_summary* summary);

/* Compares the analytic weight updates (simultaneous mode, zero momentum,
 * unit learning rate) against central finite differences of the loss
 * 0.5*sum((desired-actual)^2) with step h, writing the maximum relative
 * deviation over all weights. worst_weight may be NULL or a 3-element
 * buffer receiving the {transition, row, col} of the worst weight. Healthy
 * implementations stay below 1e-6 at h = 1e-5. */
RVN_API rvn_status rvn_gradient_check(const rvn_network* net,
                                      const double* input, size_t n_input,
                                      const double* desired, size_t n_desired,
                                      double h, double* max_relative_deviation,
                                      size_t* worst_weight);

/* ---- simulation ------------------------------------------------------- */

typedef struct rvn_sim_config {
  double dt;                 /* seconds per step, default 0.1 */
  double wheelbase;          /* default 0.5 */
  double v_max;              /* wheel speed cap, default 1.0 */
  double k_goal;             /* goal-bearing turn gain, default 1.0 */
  double sense_range;        /* default 3.0 */
  double sensor_angle_left;  /* default +pi/4 off heading */
  double sensor_angle_right; /* default -pi/4 off heading */
  double rover_radius;       /* default 0.1 */
  double goal_tolerance;     /* default 0.25 */
  uint64_t max_steps;        /* default 2000 */
} rvn_sim_config;

/* Fills cfg with the defaults listed above. */
RVN_API void rvn_sim_config_init(rvn_sim_config* cfg);

/* Applies the overrides found in a JSON config file onto *cfg. */
RVN_API rvn_status rvn_sim_config_load(const char* path, rvn_sim_config* cfg);

/* Loads a scenario JSON file: {"start":[x,y], "goal":[x,y],
 * "obstacles":[{"c":[x,y],"r":radius}, ...]}. The rover starts facing the
 * goal. */
RVN_API rvn_status rvn_world_load(const char* path, rvn_world** out);
RVN_API void rvn_world_free(rvn_world* world);

/* Runs the simulation loop: each step senses the two obstacle rays, feeds
 * the readings through the network to get wheel speeds, records the state,
 * and advances the differential-drive kinematics until the rover collides,
 * reaches the goal, or times out after max_steps steps. The network must
 * map 2 inputs to 2 outputs. Deterministic. */
RVN_API rvn_status rvn_simulate(const rvn_network* net, const rvn_world* world,
                                const rvn_sim_config* cfg,
                                rvn_trajectory** out);

RVN_API rvn_status rvn_trajectory_outcome(const rvn_trajectory* t,
                                          rvn_outcome* out);
RVN_API rvn_status rvn_trajectory_size(const rvn_trajectory* t, size_t* out);

/* Copies step index into out_values as
 * {x, y, heading, sense_left, sense_right, v_left, v_right}. */
RVN_API rvn_status rvn_trajectory_step(const rvn_trajectory* t, size_t index,
                                       double out_values[7]);

RVN_API rvn_status rvn_trajectory_export_csv(const rvn_trajectory* t,
                                             const char* path);
RVN_API rvn_status rvn_trajectory_export_svg(const rvn_trajectory* t,
                                             const rvn_world* world,
                                             const char* path);
RVN_API void rvn_trajectory_free(rvn_trajectory* t);

#ifdef __cplusplus
}
#endif

#endif /* ROVERNET_H */
