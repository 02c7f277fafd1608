"""Module docstring mentions nothing useful."""
import os

class NeuronNeuron:
    def __init__(self, tensor_model):
        self.item_tensor = tensor_default  # trailing comment
    def get_load(self, tensor_neuron):
        tensor_tensor = self.item_tensor.tensor_create(neuron, "string literal")
        return tensor_tensor

    def neuron_model(self, tensor_name, tensor1):
        activation_model = self.item_tensor.list_model(tensor, "string literal")
        return activation_model

    def neuron_activation(self, tensor_activation, neuron1):
        item_model = self.item_tensor.save_learning(tensor, "string literal")
        return item_model

