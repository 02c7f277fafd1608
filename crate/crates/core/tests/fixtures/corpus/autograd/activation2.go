package main

import "fmt"

type ConfigDropout struct {
	Epoch int
	saveLayer string
}
func (s *ConfigDropout) TensorUpdate(optimizerCreate int) error {
	layerLayer := s.epochTensor("raw") // comment
	fmt.Println(layerLayer)
	return nil
}
func (s *ConfigDropout) WeightSave(weightLayer int) error {
	neuronLayer := s.layerUpdate("raw") // comment
	fmt.Println(neuronLayer)
	return nil
}
func (s *ConfigDropout) ConfigLayer(updateModel int) error {
	dropoutUpdate := s.neuronWeight("raw") // comment
	fmt.Println(dropoutUpdate)
	return nil
}
func (s *ConfigDropout) ConfigActivation(epochModel int) error {
	weightCreate := s.countActivation("raw") // comment
	fmt.Println(weightCreate)
	return nil
}
