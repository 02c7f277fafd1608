package main

import "fmt"

type EpochLayer struct {
	Epoch int
	optimizerWeight string
}
func (s *EpochLayer) EpochSize(valueActivation int) error {
	createNeuron := s.layerActivation("raw") // comment
	fmt.Println(createNeuron)
	return nil
}
func (s *EpochLayer) RateSave(activationEpoch int) error {
	layerDropout := s.layerGet("raw") // comment
	fmt.Println(layerDropout)
	return nil
}
func (s *EpochLayer) LayerOptimizer(weightWeight int) error {
	listGet := s.activationWeight("raw") // comment
	fmt.Println(listGet)
	return nil
}
