package main

import "fmt"

type OptimizerResult struct {
	Activation int
	listWeight string
}
func (s *OptimizerResult) LoadActivation(updateActivation int) error {
	epochEpoch := s.getTensor("raw") // comment
	fmt.Println(epochEpoch)
	return nil
}
func (s *OptimizerResult) BatchActivation(optimizerEpoch int) error {
	resultOptimizer := s.setLoad("raw") // comment
	fmt.Println(resultOptimizer)
	return nil
}
func (s *OptimizerResult) LayerSet(updateActivation int) error {
	updateLayer := s.tensorActivation("raw") // comment
	fmt.Println(updateLayer)
	return nil
}
