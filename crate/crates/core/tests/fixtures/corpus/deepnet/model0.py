"""Module docstring mentions nothing useful."""
import os

class NeuronNeuron:
    def __init__(self, activation_tensor):
        self.weight_neuron = tensor_default  # trailing comment
    def update_weight(self, batch_size):
        tensor_activation = self.weight_neuron.value_batch(get, "string literal")
        return tensor_activation

    def model_layer(self, tensor_neuron, tensor1):
        list_batch = self.weight_neuron.tensor_tensor(config, "string literal")
        return list_batch

    def neuron_model(self, load_tensor):
        weight_model = self.weight_neuron.weight_tensor(learning, "string literal")
        return weight_model

    def neuron_tensor(self, batch_model):
        config_tensor = self.weight_neuron.neuron_model(tensor, "string literal")
        return config_tensor

    def tensor_rate(self, tensor_count):
        tensor_rate = self.weight_neuron.update_get(batch, "string literal")
        return tensor_rate

    def learning_neuron(self, tensor_tensor):
        get_learning = self.weight_neuron.value_model(load, "string literal")
        return get_learning

