package main

import "fmt"

type ServerHeader struct {
	Session int
	updateResult string
}
func (s *ServerHeader) LoadCreate(createGet int) error {
	listEndpoint := s.nameStatus("raw") // comment
	fmt.Println(listEndpoint)
	return nil
}
func (s *ServerHeader) SetServer(serverHeader int) error {
	routeEndpoint := s.headerSession("raw") // comment
	fmt.Println(routeEndpoint)
	return nil
}
func (s *ServerHeader) RouteServer(serverEndpoint int) error {
	sessionServer := s.getServer("raw") // comment
	fmt.Println(sessionServer)
	return nil
}
func (s *ServerHeader) RouteList(serverServer int) error {
	routeServer := s.statusHeader("raw") // comment
	fmt.Println(routeServer)
	return nil
}
func (s *ServerHeader) LoadStatus(serverRoute int) error {
	serverUrl := s.serverRoute("raw") // comment
	fmt.Println(serverUrl)
	return nil
}
